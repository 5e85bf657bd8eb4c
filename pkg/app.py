"""
Main entry point for the Signed Qubit Entropy toolkit

Usage:
    python app.py maxent --r 1/sqrt3,1/sqrt3,1/sqrt3 --k 2
    python app.py check --r 0.6,0,0.8 --kmax 5
"""

from app.cli import main

if __name__ == '__main__':
    main()

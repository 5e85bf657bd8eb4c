"""
Services for the Signed Qubit Entropy toolkit
Phase-space representation, entropies, minimum-norm solves, dual geometry and the membership oracle
"""

from app.services.phase_space_service import PhaseSpaceService
from app.services.entropy_service import EntropyService
from app.services.maxent_service import MaxEntSolver
from app.services.dual_geometry_service import DualBalls, DualGeometryService
from app.services.oracle_service import OracleService

__all__ = [
    'PhaseSpaceService',
    'EntropyService',
    'MaxEntSolver',
    'DualBalls',
    'DualGeometryService',
    'OracleService',
]

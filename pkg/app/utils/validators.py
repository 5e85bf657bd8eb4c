"""
Input validation utilities for the Signed Qubit Entropy toolkit
"""

import math
import re
from typing import Dict, List, Optional, Sequence

import numpy as np

# Exact tokens accepted in vectors besides decimals
SPECIAL_TOKENS = {
    '1/sqrt3': 1.0 / math.sqrt(3.0),
    '-1/sqrt3': -1.0 / math.sqrt(3.0),
    '+1/sqrt3': 1.0 / math.sqrt(3.0),
}

DECIMAL_PATTERN = re.compile(r'^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$')


class DataValidator:
    """Utility class for parsing and validating numeric inputs."""

    @staticmethod
    def parse_number(token: str) -> float:
        """Parse one decimal (or special) token."""
        cleaned = token.strip().lower().replace(' ', '')
        if cleaned in SPECIAL_TOKENS:
            return SPECIAL_TOKENS[cleaned]
        if not DECIMAL_PATTERN.match(cleaned):
            raise ValueError(f"Not a decimal number: {token!r}")
        return float(cleaned)

    @classmethod
    def parse_vector(cls, text: str, length: int = 3) -> List[float]:
        """Parse comma-separated decimals such as '0.6,0,0.8' or '1/sqrt3,1/sqrt3,1/sqrt3'."""
        if text is None or not str(text).strip():
            raise ValueError("Empty vector")

        tokens = str(text).split(',')
        if len(tokens) != length:
            raise ValueError(f"Expected {length} comma-separated values, got {len(tokens)}")

        return [cls.parse_number(token) for token in tokens]

    @staticmethod
    def validate_order(k: int) -> bool:
        """Validate an entropy order index k >= 1."""
        return isinstance(k, (int, np.integer)) and not isinstance(k, bool) and k >= 1

    @staticmethod
    def validate_positive(value: float) -> bool:
        """Validate a strictly positive finite real."""
        try:
            return math.isfinite(float(value)) and float(value) > 0.0
        except (TypeError, ValueError):
            return False

    @staticmethod
    def validate_step(step: float) -> bool:
        """Validate a grid step in (0, 1]."""
        try:
            return 0.0 < float(step) <= 1.0
        except (TypeError, ValueError):
            return False

    @staticmethod
    def validate_unit_direction(direction: Sequence[float], tol: float = 1e-10) -> bool:
        """Validate a unit 3-vector."""
        d = np.asarray(direction, dtype=float)
        return d.shape == (3,) and bool(np.all(np.isfinite(d))) and abs(np.linalg.norm(d) - 1.0) <= tol

    @staticmethod
    def validate_step_schedule(steps: Sequence[float]) -> bool:
        """Validate positive, strictly decreasing finite-difference steps."""
        h = np.asarray(steps, dtype=float)
        if h.ndim != 1 or h.size == 0 or not np.all(h > 0.0):
            return False
        return bool(np.all(np.diff(h) < 0.0))

    @classmethod
    def validate_probe_args(cls, alpha: float, order: int,
                            steps: Optional[Sequence[float]] = None) -> Dict[str, List[str]]:
        """Validate smoothness-probe arguments and return validation errors."""
        errors = {}

        if not cls.validate_positive(alpha):
            errors.setdefault('alpha', []).append('alpha must be a positive real')

        if not cls.validate_order(order):
            errors.setdefault('order', []).append('derivative order must be an integer >= 1')

        if steps is not None and not cls.validate_step_schedule(steps):
            errors.setdefault('steps', []).append('steps must be positive and strictly decreasing')

        return errors

"""
Configuration Manager for Pixel Adapter Bench
Handles loading and saving configuration settings
"""

import os
import configparser
from typing import Dict, List, Optional

from data_models import HogParams
from errors import KernelError
from helpers.constants import (DEFAULT_CHANNELS, DEFAULT_GRADCHECK_EPS, DEFAULT_GRADCHECK_TOL,
                               DEFAULT_HALO_BLOCK, DEFAULT_HALO_WIDTH, DEFAULT_LCA_WEIGHT,
                               DEFAULT_PGA_MAX_PIXELS, DEFAULT_REPS, DEFAULT_SIZES, DEFAULT_VERIFY_CASES,
                               DEFAULT_WINDOW, KERNEL_KINDS, ORACLE_TOLERANCE, PRECISION_F32, PRECISIONS,
                               SOFTMAX_TOLERANCE)
from utils import parse_int_list, parse_name_list


def _int(data: Dict[str, str], key: str, default: int) -> int:
    try:
        return int(data.get(key, default))
    except ValueError:
        raise KernelError(f"config key '{key}' must be an integer, got '{data[key]}'")


def _float(data: Dict[str, str], key: str, default: float) -> float:
    try:
        return float(data.get(key, default))
    except ValueError:
        raise KernelError(f"config key '{key}' must be a number, got '{data[key]}'")


class BenchConfig:
    """Settings of the bench command"""

    def __init__(self, sizes: Optional[List[int]] = None, channels: int = DEFAULT_CHANNELS,
                 k: int = DEFAULT_WINDOW, kernels: Optional[List[str]] = None, reps: int = DEFAULT_REPS,
                 block: int = DEFAULT_HALO_BLOCK, halo: int = DEFAULT_HALO_WIDTH,
                 pga_max_pixels: int = DEFAULT_PGA_MAX_PIXELS, precision: str = PRECISION_F32):
        self.sizes = list(sizes) if sizes else list(DEFAULT_SIZES)
        self.channels = channels
        self.k = k
        self.kernels = list(kernels) if kernels else list(KERNEL_KINDS)
        self.reps = reps
        self.block = block
        self.halo = halo
        self.pga_max_pixels = pga_max_pixels
        if precision not in PRECISIONS:
            raise KernelError(f"precision must be one of {', '.join(PRECISIONS)}, got '{precision}'")
        self.precision = precision

    def to_dict(self) -> Dict[str, str]:
        """Convert to dictionary for saving"""
        return {
            'sizes': ','.join(str(s) for s in self.sizes),
            'channels': str(self.channels),
            'k': str(self.k),
            'kernels': ','.join(self.kernels),
            'reps': str(self.reps),
            'block': str(self.block),
            'halo': str(self.halo),
            'pga_max_pixels': str(self.pga_max_pixels),
            'precision': self.precision,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, str]) -> 'BenchConfig':
        """Create from dictionary"""
        sizes = data.get('sizes')
        kernels = data.get('kernels')
        return cls(
            sizes=parse_int_list(sizes, 'sizes') if sizes else None,
            channels=_int(data, 'channels', DEFAULT_CHANNELS),
            k=_int(data, 'k', DEFAULT_WINDOW),
            kernels=parse_name_list(kernels, KERNEL_KINDS, 'kernel') if kernels else None,
            reps=_int(data, 'reps', DEFAULT_REPS),
            block=_int(data, 'block', DEFAULT_HALO_BLOCK),
            halo=_int(data, 'halo', DEFAULT_HALO_WIDTH),
            pga_max_pixels=_int(data, 'pga_max_pixels', DEFAULT_PGA_MAX_PIXELS),
            precision=data.get('precision', PRECISION_F32),
        )


class VerifyConfig:
    """Settings of the verify command"""

    def __init__(self, cases: int = DEFAULT_VERIFY_CASES, tolerance: float = ORACLE_TOLERANCE,
                 softmax_tolerance: float = SOFTMAX_TOLERANCE):
        self.cases = cases
        self.tolerance = tolerance
        self.softmax_tolerance = softmax_tolerance

    def to_dict(self) -> Dict[str, str]:
        return {
            'cases': str(self.cases),
            'tolerance': repr(self.tolerance),
            'softmax_tolerance': repr(self.softmax_tolerance),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, str]) -> 'VerifyConfig':
        return cls(
            cases=_int(data, 'cases', DEFAULT_VERIFY_CASES),
            tolerance=_float(data, 'tolerance', ORACLE_TOLERANCE),
            softmax_tolerance=_float(data, 'softmax_tolerance', SOFTMAX_TOLERANCE),
        )


class GradcheckConfig:
    """Settings of the gradcheck command"""

    def __init__(self, eps: float = DEFAULT_GRADCHECK_EPS, tol: float = DEFAULT_GRADCHECK_TOL):
        self.eps = eps
        self.tol = tol

    def to_dict(self) -> Dict[str, str]:
        return {'eps': repr(self.eps), 'tol': repr(self.tol)}

    @classmethod
    def from_dict(cls, data: Dict[str, str]) -> 'GradcheckConfig':
        return cls(eps=_float(data, 'eps', DEFAULT_GRADCHECK_EPS),
                   tol=_float(data, 'tol', DEFAULT_GRADCHECK_TOL))


class HogConfig:
    """HOG parameters plus the contour loss weight"""

    def __init__(self, params: Optional[HogParams] = None, lca_weight: float = DEFAULT_LCA_WEIGHT):
        if not lca_weight >= 0:
            raise KernelError(f"lca_weight must be >= 0, got {lca_weight}")
        self.params = params or HogParams()
        self.lca_weight = lca_weight

    def to_dict(self) -> Dict[str, str]:
        data = self.params.to_dict()
        data['lca_weight'] = repr(self.lca_weight)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, str]) -> 'HogConfig':
        return cls(HogParams.from_dict(data), _float(data, 'lca_weight', DEFAULT_LCA_WEIGHT))


class LoggingConfig:
    """Log level and optional log file"""

    def __init__(self, level: str = "INFO", file: str = ""):
        self.level = level
        self.file = file

    def to_dict(self) -> Dict[str, str]:
        return {'level': self.level, 'file': self.file}

    @classmethod
    def from_dict(cls, data: Dict[str, str]) -> 'LoggingConfig':
        return cls(level=data.get('level', 'INFO'), file=data.get('file', ''))


class ConfigManager:
    """Manages configuration settings for Pixel Adapter Bench"""

    SECTIONS = ('bench', 'verify', 'gradcheck', 'hog', 'logging')

    def __init__(self):
        self.config_file = ""
        self.bench = BenchConfig()
        self.verify = VerifyConfig()
        self.gradcheck = GradcheckConfig()
        self.hog = HogConfig()
        self.logging = LoggingConfig()

    def load_config(self, config_file: str):
        """Load configuration from file; a missing file keeps the defaults"""
        self.config_file = config_file

        if not os.path.exists(config_file):
            return

        config = configparser.ConfigParser()
        try:
            config.read(config_file)
        except configparser.Error as e:
            raise KernelError(f"cannot parse {config_file}: {e}")

        if config.has_section('bench'):
            self.bench = BenchConfig.from_dict(dict(config['bench']))
        if config.has_section('verify'):
            self.verify = VerifyConfig.from_dict(dict(config['verify']))
        if config.has_section('gradcheck'):
            self.gradcheck = GradcheckConfig.from_dict(dict(config['gradcheck']))
        if config.has_section('hog'):
            self.hog = HogConfig.from_dict(dict(config['hog']))
        if config.has_section('logging'):
            self.logging = LoggingConfig.from_dict(dict(config['logging']))

    def save_config(self, config_file: Optional[str] = None):
        """Save configuration to file"""
        if config_file is None:
            config_file = self.config_file

        if not config_file:
            return

        config = configparser.ConfigParser()
        for section in self.SECTIONS:
            config[section] = getattr(self, section).to_dict()

        # Create directory if it doesn't exist
        directory = os.path.dirname(config_file)
        if directory:
            os.makedirs(directory, exist_ok=True)

        with open(config_file, 'w') as f:
            config.write(f)

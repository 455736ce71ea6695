# -*- coding: utf-8 -*-
"""
Configuration for the polyhedral engine.
Configurable limits and verification defaults, read from the environment.
"""

import os

# Maximum ambient dimension accepted from input files
MAX_DIM = int(os.getenv("NORMALFAN_MAX_DIM", "8"))

# Desk-scale row count; larger inputs are accepted but logged
MAX_CONSTRAINTS = int(os.getenv("NORMALFAN_MAX_CONSTRAINTS", "24"))

# Instance generation
DEFAULT_COEFFICIENT_BOUND = int(os.getenv("NORMALFAN_COEFFICIENT_BOUND", "8"))
RESAMPLE_LIMIT = int(os.getenv("NORMALFAN_RESAMPLE_LIMIT", "100"))

# Verification defaults
DEFAULT_RANDOM_SAMPLES = int(os.getenv("NORMALFAN_RANDOM_SAMPLES", "50"))
DEFAULT_SEED = int(os.getenv("NORMALFAN_SEED", "0"))

# Random points are drawn from the bounding box of the face witnesses, widened by this margin
SAMPLE_WINDOW_MARGIN = int(os.getenv("NORMALFAN_WINDOW_MARGIN", "2"))

# Small-w samples per stratum for the localization check
LEMMA2_SAMPLES_PER_STRATUM = int(os.getenv("NORMALFAN_LEMMA2_SAMPLES", "10"))

# Thread pool size used to evaluate sample points
VERIFY_WORKERS = int(os.getenv("NORMALFAN_WORKERS", "1"))

# Enable debug mode (set via environment variable)
DEBUG_ENABLED = os.getenv("NORMALFAN_DEBUG", "false").lower() == "true"

LOG_LEVEL = os.getenv("NORMALFAN_LOG_LEVEL", "WARNING").upper()

# Full-size acceptance runs in the test suite
FULL_ACCEPTANCE = os.getenv("NORMALFAN_FULL_ACCEPTANCE", "false").lower() == "true"

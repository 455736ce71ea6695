# -*- coding: utf-8 -*-
"""
Random instances and brute-force oracles for property tests.
"""

from .generator import GenSpec, InstanceKind, boundary_samples, gen_instance
from .oracle import oracle_cell_hreps, oracle_phi

__all__ = ['GenSpec', 'InstanceKind', 'boundary_samples', 'gen_instance', 'oracle_cell_hreps', 'oracle_phi']

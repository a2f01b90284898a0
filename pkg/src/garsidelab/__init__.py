"""Garside normal forms and loxodromy certificates for spherical Artin-Tits groups."""

__version__ = "0.1.0"

from .coxeter import CoxeterType, RootSystem, UnsupportedType, build_root_system, parse_type
from .garside import ArtinElement, ArtinGroup, Simple
from .certify import LoxodromicSeed, Padder, PaddingCertificate, SeedRegistry, certify
from .lab import BallCensus, SubgroupSpec, census_certified, enumerate_ball, subgroup_generators

__all__ = [
    "ArtinElement", "ArtinGroup", "BallCensus", "CoxeterType", "LoxodromicSeed", "Padder",
    "PaddingCertificate", "RootSystem", "SeedRegistry", "Simple", "SubgroupSpec",
    "UnsupportedType", "build_root_system", "census_certified", "certify", "enumerate_ball",
    "parse_type", "subgroup_generators",
]

"""qcfkit: exact and certified-precision verification of q-continued-fraction
behavior on and near the unit circle.

Subpackages:
    polyring   exact integer polynomials and cyclotomic quotient rings
    cf_engine  generic three-term recurrence, periodic limits, Worpitzky
    families   the K / S1 / S2 / S3 / GG catalog and root-of-unity checks
    lipschitz  strictly increasing circle Lipschitz constants
    rcf        regular continued fractions and power-tower quotients
    witness    divergence-witness construction and stage certificates
    cli        report-producing command-line front end
"""

__version__ = "0.1.0"

from .polyring import CycloElem, IntPoly, cyclotomic_poly, reduce, weighted_coeff_sum  # noqa: F401
from .families import FAMILY_NAMES, FamilySpec, make_family  # noqa: F401

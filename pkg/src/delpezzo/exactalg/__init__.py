from .fields import (
    MODULI,
    QQ,
    ExtensionField,
    Field,
    FieldElem,
    PrimeField,
    RationalField,
    embedding,
    field_for,
    fq_make,
    is_irreducible,
    is_prime,
)
from .linalg import det3, echelon, nullspace, rank
from .poly import MultiPoly, PolyParseError, monomials_of_degree, parse_expr, parse_poly
from .rings import NonUnitError, RewriteRing, RingElem, dual_extend, series_ring
from .series import SingularGermError, hensel_graph, s_inv, s_mul

__all__ = [
    "MODULI",
    "QQ",
    "ExtensionField",
    "Field",
    "FieldElem",
    "MultiPoly",
    "NonUnitError",
    "PolyParseError",
    "PrimeField",
    "RationalField",
    "RewriteRing",
    "RingElem",
    "SingularGermError",
    "det3",
    "dual_extend",
    "echelon",
    "embedding",
    "field_for",
    "fq_make",
    "hensel_graph",
    "is_irreducible",
    "is_prime",
    "monomials_of_degree",
    "nullspace",
    "parse_expr",
    "parse_poly",
    "rank",
    "s_inv",
    "s_mul",
    "series_ring",
]

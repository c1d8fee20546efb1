"""Exact multiplicative genera, elliptic genus and S^1-localization checks."""

from .exact import LaurentPoly, QSeries, RationalFunc, expand_geometric, rf_canonical, rf_is_constant
from .genus import (
    GenusPolynomial,
    PontryaginData,
    a_hat_genus,
    a_hat_polynomial,
    elliptic_genus,
    evaluate_genus,
    l_genus,
    l_polynomial,
    multiplicative_sequence,
    twisted_signature,
)
from .localization import (
    BalanceReport,
    FixedPoint,
    Lemma2Report,
    RigidityVerdict,
    S1ManifoldData,
    check_rigidity,
    equivariant_a_hat,
    equivariant_elliptic_genus,
    equivariant_twisted_signature,
    is_two_balanced,
    lemma2_verify,
    product_manifold,
)
from .rseries import BundleExpr, expand_R, r_character_series, restrict_character

__version__ = "0.1.0"

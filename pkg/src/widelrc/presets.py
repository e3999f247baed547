"""Named parameter sets: three stripe widths for each of the four families.

Schemes are keyed "30-of-42", "112-of-136" and "180-of-210".  Within one
scheme all families share n, k and the scheme-wide failure-tolerance
requirement used by the reliability model.  Baseline parameters at the
two wider schemes follow the same shape rules as the 42-block instances:
alrc keeps g = requirement-1 so that g+2 = requirement+1; ulrc keeps
g = requirement with near-equal group sizes; olrc keeps two-ish-large
overlapping windows at roughly the same locality fraction of the stripe.
"""

from __future__ import annotations

from . import codes

SCHEMES = ("30-of-42", "112-of-136", "180-of-210")

# scheme -> (n, k, tolerated failure requirement)
SCHEME_PARAMS = {
    "30-of-42": (42, 30, 7),
    "112-of-136": (136, 112, 17),
    "180-of-210": (210, 180, 21),
}

_BUILDERS = {
    ("unilrc", "30-of-42"): lambda: codes.build_unilrc(1, 6),
    ("unilrc", "112-of-136"): lambda: codes.build_unilrc(2, 8),
    ("unilrc", "180-of-210"): lambda: codes.build_unilrc(2, 10),
    ("alrc", "30-of-42"): lambda: codes.build_alrc(30, 5, 6),
    ("alrc", "112-of-136"): lambda: codes.build_alrc(112, 14, 16),
    ("alrc", "180-of-210"): lambda: codes.build_alrc(180, 18, 20),
    ("olrc", "30-of-42"): lambda: codes.build_olrc(30, 25, 6, 6),
    ("olrc", "112-of-136"): lambda: codes.build_olrc(112, 89, 16, 8),
    ("olrc", "180-of-210"): lambda: codes.build_olrc(180, 139, 20, 10),
    ("ulrc", "30-of-42"): lambda: codes.build_ulrc(30, 7, 8, 3, 2),
    ("ulrc", "112-of-136"): lambda: codes.build_ulrc(112, 18, 19, 4, 3),
    ("ulrc", "180-of-210"): lambda: codes.build_ulrc(180, 22, 23, 6, 3),
}


def preset_names() -> list[str]:
    return [f"{family}-{scheme}" for family, scheme in _BUILDERS]


def build_preset(family: str, scheme: str) -> codes.CodeDefinition:
    try:
        builder = _BUILDERS[(family, scheme)]
    except KeyError:
        raise codes.ParameterError(
            f"no preset for family={family!r} scheme={scheme!r}"
        ) from None
    code = builder()
    n, k, _ = SCHEME_PARAMS[scheme]
    assert code.spec.n == n and code.spec.k == k
    return code


def chain_failures(code: codes.CodeDefinition, scheme: str) -> int:
    """Markov-chain length for the reliability model.

    All schemes are compared at the same tolerated-failure requirement,
    except olrc whose larger claimed distance supports a longer chain.
    """
    _, _, requirement = SCHEME_PARAMS[scheme]
    if code.spec.family == codes.FAMILY_OLRC:
        return code.spec.f
    return requirement

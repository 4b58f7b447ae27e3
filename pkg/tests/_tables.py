"""Frozen closed-form 1-jets of the affine normal and shape operator.

These are the published coefficient tables for the definite/indefinite
normal forms (factorial convention h = sum q_ij u^i v^j / (i! j!)); the
test modules compare the package's jet pipeline against them.  Each entry
is (constant, u-coefficient, v-coefficient).
"""

from __future__ import annotations


def _g(q, name):
    return float(q.get(name, 0.0))


def xi_linear_elliptic(sigma, q):
    """1-jets of the first two components of the affine normal, definite case."""
    q40, q31, q22, q13, q04 = (_g(q, n) for n in ("q40", "q31", "q22", "q13", "q04"))
    xi1 = (0.0, 0.5 * sigma ** 2 - 0.25 * q22 - 0.25 * q40, -0.25 * (q13 + q31))
    xi2 = (0.0, -0.25 * (q13 + q31), 0.5 * sigma ** 2 - 0.25 * q04 - 0.25 * q22)
    return xi1, xi2


def xi_linear_hyperbolic(sigma, q):
    q40, q31, q22, q13, q04 = (_g(q, n) for n in ("q40", "q31", "q22", "q13", "q04"))
    xi1 = (0.0, 0.5 * sigma ** 2 + 0.25 * q22 - 0.25 * q40, 0.25 * (q13 - q31))
    xi2 = (0.0, -0.25 * (q13 - q31), 0.5 * sigma ** 2 - 0.25 * q04 + 0.25 * q22)
    return xi1, xi2


def shape_linear_elliptic(sigma, q):
    """1-jets of the shape coefficients b11, b12, b21, b22, definite case."""
    q40, q31, q22, q13, q04 = (_g(q, n) for n in ("q40", "q31", "q22", "q13", "q04"))
    q50, q41, q32, q23, q14, q05 = (
        _g(q, n) for n in ("q50", "q41", "q32", "q23", "q14", "q05")
    )
    s3 = sigma ** 3
    b11 = (
        0.5 * sigma ** 2 - 0.25 * q22 - 0.25 * q40,
        -s3 - 0.25 * sigma * q22 + 1.25 * sigma * q40 - 0.25 * q32 - 0.25 * q50,
        -0.25 * q41 - 0.5 * sigma * q13 - 0.25 * q23,
    )
    b12 = (
        -0.25 * (q13 + q31),
        -0.25 * q41 - 0.5 * sigma * q13 - 0.25 * q23,
        s3 - 1.25 * sigma * q22 - 0.25 * q32 - 0.75 * sigma * q04 - 0.25 * q14,
    )
    b21 = (
        -0.25 * (q13 + q31),
        -0.5 * sigma * q31 - 0.25 * q41 - sigma * q13 - 0.25 * q23,
        s3 - 0.25 * sigma * q40 - 1.25 * sigma * q22 - 0.25 * q32
        - 0.5 * sigma * q04 - 0.25 * q14,
    )
    b22 = (
        0.5 * sigma ** 2 - 0.25 * q22 - 0.25 * q04,
        s3 - 0.25 * sigma * q40 - 1.25 * sigma * q22 - 0.25 * q32
        - 0.5 * sigma * q04 - 0.25 * q14,
        -0.5 * sigma * q31 - 2.0 * sigma * q13 - 0.25 * q23 - 0.25 * q05,
    )
    return {"b11": b11, "b12": b12, "b21": b21, "b22": b22}


def shape_linear_hyperbolic(sigma, q):
    q40, q31, q22, q13, q04 = (_g(q, n) for n in ("q40", "q31", "q22", "q13", "q04"))
    q50, q41, q32, q23, q14, q05 = (
        _g(q, n) for n in ("q50", "q41", "q32", "q23", "q14", "q05")
    )
    s3 = sigma ** 3
    b11 = (
        -0.5 * sigma ** 2 - 0.25 * q22 + 0.25 * q40,
        -(-s3 + 0.25 * sigma * q22 + 1.25 * sigma * q40 + 0.25 * q32 - 0.25 * q50),
        -(0.5 * sigma * q13 + 0.25 * q23 - 0.25 * q41),
    )
    b12 = (
        0.25 * (q31 - q13),
        -(-0.25 * q41 + 0.5 * sigma * q13 + 0.25 * q23),
        -(-s3 - 1.25 * sigma * q22 - 0.25 * q32 + 0.75 * sigma * q04 + 0.25 * q14),
    )
    b21 = (
        -0.25 * (q31 - q13),
        -(0.5 * sigma * q31 + 0.25 * q41 - sigma * q13 - 0.25 * q23),
        -(s3 - 0.25 * sigma * q40 + 1.25 * sigma * q22 + 0.25 * q32
          - 0.5 * sigma * q04 - 0.25 * q14),
    )
    b22 = (
        -0.5 * sigma ** 2 - 0.25 * q22 + 0.25 * q04,
        -(s3 - 0.25 * sigma * q40 + 1.25 * sigma * q22 + 0.25 * q32
          - 0.5 * sigma * q04 - 0.25 * q14),
        -(-0.5 * sigma * q31 + 2.0 * sigma * q13 + 0.25 * q23 - 0.25 * q05),
    )
    return {"b11": b11, "b12": b12, "b21": b21, "b22": b22}


def jet_linear(jet):
    """(constant, u-coefficient, v-coefficient) of a 2-variable jet."""
    return (
        float(jet.coefficient(0, 0)),
        float(jet.coefficient(1, 0)),
        float(jet.coefficient(0, 1)),
    )


def buchin_display_jets(q):
    """Published 2-jets of the curvature-line equation in the uv chart.

    The published table is 4x the package's coefficient normalization.
    Returns (A, B, C, delta) as {(i, j): value} monomial-coefficient dicts;
    delta carries only its 1-jet.
    """
    q30, q03 = _g(q, "q30"), _g(q, "q03")
    q40, q31, q22, q13, q04 = (
        _g(q, n) for n in ("q40", "q31", "q22", "q13", "q04")
    )
    q50, q41, q32, q23, q14, q05 = (
        _g(q, n) for n in ("q50", "q41", "q32", "q23", "q14", "q05")
    )
    q60, q51, q42, q33, q24, q15, q06 = (
        _g(q, n) for n in ("q60", "q51", "q42", "q33", "q24", "q15", "q06")
    )
    A = {
        (0, 0): -32 * q31,
        (1, 0): 16 * (-2 * q03 * q30 ** 2 + 7 * q22 * q30 - 2 * q41),
        (0, 1): 16 * (q03 * q40 + 4 * q13 * q30 - 2 * q32),
        (2, 0): -16 * (3 * q03 * q30 * q40 + 3 * q13 * q30 ** 2 - 6 * q22 * q40
                       - 5 * q30 * q32 + q31 ** 2 + q51),
        (1, 1): -16 * (10 * q03 * q30 * q31 + 2 * q04 * q30 ** 2 - q03 * q50
                       - 5 * q13 * q40 - 5 * q22 * q31 - 7 * q23 * q30 + 2 * q42),
        (0, 2): 4 * (7 * q03 ** 2 * q30 ** 2 - 32 * q03 * q22 * q30 + 4 * q03 * q41
                     + 2 * q04 * q40 + 8 * q14 * q30 + 18 * q22 ** 2 - 4 * q33),
    }
    B = {
        (0, 0): 0.0,
        (1, 0): 32 * q30 * q13,
        (0, 1): -32 * q03 * q31,
        (2, 0): -16 * (4 * q03 * q30 * q31 + q04 * q30 ** 2 - q13 * q40
                       + q22 * q31 - 2 * q23 * q30),
        (1, 1): -32 * (q03 * q41 - q14 * q30),
        (0, 2): 16 * (q03 ** 2 * q40 + 4 * q03 * q13 * q30 - 2 * q03 * q32
                      - q04 * q31 + q13 * q22),
    }
    C = {
        (0, 0): 32 * q13,
        (1, 0): -16 * (4 * q03 * q31 + q04 * q30 - 2 * q23),
        (0, 1): 16 * (2 * q03 ** 2 * q30 - 7 * q03 * q22 + 2 * q14),
        (2, 0): -4 * (7 * q03 ** 2 * q30 ** 2 - 32 * q03 * q22 * q30 + 8 * q03 * q41
                      + 2 * q04 * q40 + 4 * q14 * q30 + 18 * q22 ** 2 - 4 * q33),
        (1, 1): 16 * (2 * q03 ** 2 * q40 + 10 * q03 * q13 * q30 - 7 * q03 * q32
                      - 5 * q04 * q31 - q05 * q30 - 5 * q13 * q22 + 2 * q24),
        (0, 2): 16 * (3 * q03 ** 2 * q31 + 3 * q03 * q04 * q30 - 5 * q03 * q23
                      - 6 * q04 * q22 + q13 ** 2 + q15),
    }
    delta = {
        (0, 0): 4096 * q31 * q13,
        (1, 0): 2048 * (2 * q03 * q13 * q30 ** 2 - 4 * q03 * q31 ** 2
                        - q04 * q30 * q31 - 7 * q13 * q22 * q30
                        + 2 * q13 * q41 + 2 * q23 * q31),
        (0, 1): 2048 * (2 * q03 ** 2 * q30 * q31 - q03 * q13 * q40
                        - 7 * q03 * q22 * q31 - 4 * q13 ** 2 * q30
                        + 2 * q13 * q32 + 2 * q14 * q31),
    }
    return A, B, C, delta


def parabolic_display_jets(k, q):
    """Published 1-jets of the curvature-line equation in the parabolic chart.

    Same normalization as the package coefficients (scale factor 1).
    """
    q30, q21, q12, q03 = (_g(q, n) for n in ("q30", "q21", "q12", "q03"))
    q40, q31, q22 = (_g(q, n) for n in ("q40", "q31", "q22"))
    A = {
        (0, 0): 0.0,
        (1, 0): 0.0,
        (0, 1): 7 * k ** 2 * q30 * (q12 * q30 - q21 ** 2),
    }
    B = {
        (0, 0): 7 * k ** 3 * q30 ** 2,
        (1, 0): k ** 2 * q30 * (10 * k * q40 + 19 * q12 * q30 - 19 * q21 ** 2),
        (0, 1): -k ** 2 * (4 * k * q21 * q40 - 14 * k * q30 * q31
                           - 21 * q03 * q30 ** 2 + 30 * q12 * q21 * q30
                           - 9 * q21 ** 3),
    }
    C = {
        (0, 0): 7 * k ** 3 * q21 * q30,
        (1, 0): k ** 2 * (7 * k * q21 * q40 + 3 * k * q30 * q31
                          - q03 * q30 ** 2 + 22 * q12 * q21 * q30
                          - 21 * q21 ** 3),
        (0, 1): k ** 2 * (3 * k * q21 * q31 + 7 * k * q22 * q30
                          + 20 * q03 * q21 * q30 - 14 * q12 ** 2 * q30
                          - 6 * q12 * q21 ** 2),
    }
    return A, B, C

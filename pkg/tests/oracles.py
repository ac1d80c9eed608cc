"""Independent reference implementations used to cross-check the package.

Everything here is deliberately naive: dense Fraction arithmetic, no
sharing with the package's own elimination or resultant code paths.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from dalg import DPoly, JetVar


def dense_rank(rows, ncols):
    """Row rank by plain Gaussian elimination over Fraction."""
    mat = [[Fraction(r.get(j, 0)) for j in range(ncols)] for r in rows]
    rank = 0
    col = 0
    nrows = len(mat)
    while rank < nrows and col < ncols:
        piv = next((i for i in range(rank, nrows) if mat[i][col]), None)
        if piv is None:
            col += 1
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pv = mat[rank][col]
        for i in range(nrows):
            if i != rank and mat[i][col]:
                f = mat[i][col] / pv
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
        col += 1
    return rank


def sympy_resultant(p_coeffs, q_coeffs):
    """Sylvester determinant of two univariate rational polynomials.

    Coefficient lists are ascending (constant first).  Built as the
    textbook Sylvester matrix and evaluated with sympy's dense
    Matrix.det, sharing no code with the package's Bareiss routine.
    (sympy.resultant itself uses a subresultant PRS whose sign can
    deviate from the Sylvester determinant, e.g. for res(t+2, t^3+5).)
    """
    m, n = len(p_coeffs) - 1, len(q_coeffs) - 1
    pd = [sympy.Rational(c) for c in reversed(p_coeffs)]
    qd = [sympy.Rational(c) for c in reversed(q_coeffs)]
    size = m + n
    rows = [[0] * size for _ in range(size)]
    for j in range(n):
        rows[j][j:j + m + 1] = pd
    for j in range(m):
        rows[n + j][j:j + n + 1] = qd
    return sympy.Matrix(rows).det()


def rand_coeff(rng, field):
    """Random field element exercising i, parameters, and x when present."""
    c = field.q(rng.randint(-6, 6), rng.randint(1, 4))
    if field.desc.kind == "Qi" and rng.random() < 0.4:
        c = c + field.i() * field.q(rng.randint(-3, 3))
    for p in field.desc.params:
        if rng.random() < 0.3:
            c = c + field.param(p) * field.q(rng.randint(-2, 2))
    if field.desc.has_x and rng.random() < 0.4:
        c = c * field.x() + field.q(rng.randint(-2, 2))
    return c


def rand_poly(rng, field, jets, max_terms=4, max_deg=3, allow_zero=False):
    """Random sparse differential polynomial over the given jets."""
    p = DPoly.zero(field)
    for _ in range(rng.randint(1, max_terms)):
        mono = DPoly.one(field)
        for _ in range(rng.randint(0, max_deg)):
            mono = mono * DPoly.var(field, rng.choice(jets))
        p = p + mono.scale(rand_coeff(rng, field))
    if not allow_zero and p.is_zero():
        return DPoly.var(field, jets[0])
    return p


DEFAULT_JETS = [JetVar.y(1), JetVar.y(1, 1), JetVar.y(2), JetVar.y(2, 1),
                JetVar.y(1, 2)]

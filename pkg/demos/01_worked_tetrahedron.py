"""A weighted tetrahedron and its four neighbours, evaluated exactly.

The centre cell carries weight 2, its facets carry (1, 2, 1, 2), and
everything else has weight 1.  In a coherent orientation the top Laplacian
is a potential minus a weighted adjacency, so the value at the centre can be
read off by hand and checked against the matrix.
"""
from fractions import Fraction

import numpy as np

from hodgelap.complex import line_complex
from hodgelap.generators import weighted_tetra
from hodgelap.hodge import apply_laplacian_local, laplacian_block


def main():
    cx, sigma, neighbors, u = weighted_tetra()
    print("levels:", " / ".join(map(str, cx.counts())))

    lc = line_complex(cx)
    q = lc.q[sigma]
    a = [lc.a[(sigma, tuple(sorted(r)))] for r in neighbors]
    print("potential q(sigma) =", q)
    print("coupling a =", [str(x) for x in a])

    vals = [u(r) for r in neighbors]
    by_hand = q * u(sigma) - sum(ai * vi for ai, vi in zip(a, vals))
    print("by hand:", f"{q}*{u(sigma)} - ({' + '.join(f'{x}*{v}' for x, v in zip(a, vals))}) =", by_hand)

    exact = apply_laplacian_local(cx, 3, "skew", u, sigma)
    print("local formula (exact):", exact, "=", float(exact))

    f = np.array([float(x) for x in u.values])
    dense = (laplacian_block(cx, 3).matrix @ f)[cx.index[3][sigma]].real
    print("sparse matrix route:  ", dense)
    assert exact == by_hand == Fraction(31, 2)


if __name__ == "__main__":
    main()

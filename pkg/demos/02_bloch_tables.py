"""Brillouin-zone norms of the normalized edge block on standard lattices.

The universal line-graph bound is 4(d-1).  On every regular lattice in the
catalogue the exact norm of the symmetric edge block is 2d, so the bound
overshoots by a factor that approaches 2 as d grows.  The second table shows
how the answer depends on the flavour and on whether triangles add their
up-part to the edge block.
"""
import time

from hodgelap.bloch import BLOCH_TABLE, DEGREE_TABLE, compare_table, variant_table


def main():
    t0 = time.perf_counter()
    print(f"{'lattice':<12}{'d':>4}{'4(d-1)':>8}{'Bloch':>12}{'ratio':>8}")
    for row in compare_table(DEGREE_TABLE):
        print(f"{row.lattice:<12}{row.degree:>4}{row.universal:>8}{row.bloch:>12.6f}{row.ratio:>8.3f}")
    print(f"({time.perf_counter() - t0:.1f}s)\n")

    expected = {"square": 8, "triangular": 12, "cubic": 12, "bcc": 16, "fcc": 24}
    cols = [("skew", False), ("skew", True), ("sym", False), ("sym", True)]
    head = "".join(f"{f + ('+up' if up else ''):>11}" for f, up in cols)
    print(f"{'lattice':<12}{head}   matches")
    for row in variant_table(BLOCH_TABLE, expected=expected):
        vals = "".join(f"{row[c]:>11.4f}" for c in cols)
        tags = ", ".join(f + ("+up" if up else "") for f, up in row["matches"])
        print(f"{row['lattice']:<12}{vals}   {tags}")


if __name__ == "__main__":
    main()

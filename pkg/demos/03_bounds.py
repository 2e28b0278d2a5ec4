"""Which norm bounds hold, and by how much.

Certificates decide a PASS/FAIL verdict; "stated" bounds are printed for
comparison.  A single edge already shows that D_down + D_up is too small
at degree 0: the multiplicity of faces has to enter.
"""
from hodgelap.bloch import catalog, torus_complex
from hodgelap.bounds import ComparabilityConstants, certify, weighted_bound, weighted_constant
from hodgelap.complex import build_complex
from hodgelap.generators import path_graph, random_complex, tetra_mesh


def show(title, report):
    print(f"{title}: |L| = {report.computed_norm:.6f}  verdict {report.verdict}")
    for c in report.certificates:
        print(f"    certificate {c.name:<32}{c.value:>10.4f}  margin {c.margin:+.4f}")
    for c in report.stated:
        flag = "" if c.margin >= -1e-8 else "   <-- violated"
        print(f"    stated      {c.name:<32}{c.value:>10.4f}  margin {c.margin:+.4f}{flag}")


def main():
    show("single edge, k=0", certify(build_complex(path_graph(2), 1), k=0))
    show("tetrahedral mesh, top degree", certify(tetra_mesh(3)))
    show("8x8 square torus, edges", certify(torus_complex(catalog("square"), 8)))
    show("random weighted complex (seed 7), k=1", certify(random_complex(7), k=1))

    c = ComparabilityConstants("0.9", "1.1", "0.8", "1.25")
    print("\nC_w(0.9, 1.1, 0.8, 1.25) =", weighted_constant(c))
    for label, d in (("d=4", 4), ("d=6", 6), ("fcc", 12)):
        print(f"    {label:<4} Delta(L) = {2 * (d - 1):>2}  bound {float(weighted_bound(c, 2 * (d - 1))):.2f}")


if __name__ == "__main__":
    main()

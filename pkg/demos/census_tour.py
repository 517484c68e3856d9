"""Run the three censuses and show what each one finds.

    python3 demos/census_tour.py
"""

from semieuclid import census as C
from semieuclid.orders import euclid_lattice
from semieuclid.lattices import successive_minima


def show(dim):
    records = C.run_census(dim)
    print(f"dim {dim}: {len(records)} orders, {sum(r.semi for r in records)} semi-euclidean only")
    for r in records:
        minima = [str(m) for m, _ in successive_minima(euclid_lattice(r.order))]
        flag = "semi" if r.semi else "eucl"
        print(f"  {flag}  disc {r.disc:>2}  mu^2 {str(r.mu_sq):>5}  minima {', '.join(minima)}")
        for h, s in zip(r.deep_holes, r.superorders):
            print(f"        hole {h}  inside the maximal order with basis {', '.join(map(str, s.basis))}")
    rep = C.verify_tables(records, C.golden_orders(dim))
    print(f"  against the shipped table: {len(rep.matched)} matched, "
          f"{len(rep.missing)} missing, {len(rep.extra)} extra, {len(rep.invalid_golden)} unreadable rows")


if __name__ == "__main__":
    for dim in (3, 5, 4):
        show(dim)

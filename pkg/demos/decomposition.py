"""Factor a random matrix over the Lipschitz order into triangular matrices.

The Lipschitz order is only semi-euclidean: its covering radius is exactly 1,
so division fails for some pairs, but never for the coprime pairs that show
up in a column of an invertible matrix.

    python3 demos/decomposition.py [length] [seed]
"""

import random
import sys

from semieuclid.euclid import decompose, random_elementary_product, to_sl_factors, verify_certificate
from semieuclid.orderfile import loads_order

LIPSCHITZ = """{"dim": 5, "algebra": {"a": "-1", "b": "-1"}, "involution": "none",
 "basis": [["1","0","0","0"], ["0","1","0","0"], ["0","0","1","0"], ["0","0","0","1"]]}"""


def main(length=6, seed=1):
    O = loads_order(LIPSCHITZ)
    M = random_elementary_product(O, length, random.Random(seed))
    print("M =", M)
    cert = decompose(M, O)
    print(f"{len(cert.factors)} factors, remainder norms {list(cert.descent)}")
    for F in cert.factors:
        print("  ", F)
    assert verify_certificate(M, cert, O)
    sl = to_sl_factors(cert)
    print(f"with the diagonal part moved to the front: {len(sl.factors)} factors")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:3]))

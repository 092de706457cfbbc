"""Smoke test for the partop extension module.

Build it first with `pip install --no-build-isolation -e crates/python`.
"""

import json
from fractions import Fraction
from pathlib import Path

import partop

CORPUS = Path(__file__).resolve().parent.parent / "crates" / "core" / "corpus"


def main():
    assert [partop.order(n) for n in range(6)] == [1, 2, 7, 34, 209, 1546]
    assert len(partop.enumerate(3)) == 34

    f = partop.PartialBijection("{1->2}")
    g = partop.PartialBijection("{0->1}")
    assert str(f * g) == "{0->2}"
    assert (f * g).inverse() == g.inverse() * f.inverse()
    assert f(1) == 2 and f(0) is None

    empty = partop.PartialBijection("{}")
    assert partop.distance(empty, partop.PartialBijection("{0->0}")) == Fraction(1, 2)
    swap = partop.PartialBijection("{0->1, 1->0}; id from 2")
    assert partop.distance(swap, swap, "d") == 0
    assert partop.evaluate("d(idempotent({0}), idempotent({1}))") == "3/2^1"
    assert g.member("v(0,1) & w1(2)")

    a = partop.PartialBijection("{0->0}", n=3)
    b = partop.PartialBijection("{0->1}", n=3)
    print("separation:", partop.separate_pair(a, b, "tau1"))

    assert partop.lift_element(partop.PartialBijection("{0->2}", n=3), 6) == [2, 3, 4, 0, 1, 5]
    assert str(partop.project_perm([1, 0, 2, 3], 2)) == "{0->1, 1->0}"

    walk = (CORPUS / "singleton_walk.json").read_text()
    agrees, topo, metric = partop.converge(walk, "rho")
    assert agrees and topo.startswith("diverges"), topo
    agrees, topo, _ = partop.converge(walk, "rho*")
    assert agrees and topo == "converges"

    report = json.loads(partop.run_verify("algebra"))
    assert report["schema"] == 1 and report["passed"], report

    try:
        partop.PartialBijection("{0->1, 1->1}")
    except partop.PartopError as e:
        print("rejected:", e)
    else:
        raise AssertionError("a non-injective literal was accepted")
    print("ok")


if __name__ == "__main__":
    main()

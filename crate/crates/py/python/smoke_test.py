"""Smoke test for the `cartan` extension module.

Run after `maturin develop` (from crates/py), or with the built library
copied next to this file as `cartan.so`.
"""

from fractions import Fraction

import cartan


def main():
    # J1(0) + J2(0) + J2(1): blocks (t, λ=(1,2)) and (t-1, λ=(2)).
    t = cartan.Matrix(
        [
            [0, 0, 0, 0, 0],
            [0, 0, 1, 0, 0],
            [0, 0, 0, 0, 0],
            [0, 0, 0, 1, 1],
            [0, 0, 0, 0, 1],
        ]
    )
    report = t.analyze()
    d = report.to_dict()
    assert d["l"] == 3 and report.l == 3
    assert report.total_cartan_det == 2
    assert report.global_dimension == "infinite"
    assert [b["factor"] for b in d["blocks"]] == ["t", "t - 1"]
    assert d["blocks"][0]["global_dimension"] == "finite:2"
    assert sum(b["dims"]["algebra"] for b in d["blocks"]) == t.centralizer_dim() == 7
    assert report.full_cartan() == [[1, 1, 0], [1, 2, 0], [0, 0, 2]]

    # Rational entries and the text format round trip.
    q = cartan.Matrix([[Fraction(1, 2), 1], [0, Fraction(1, 2)]])
    assert str(q.charpoly()) == "t^2 - t + 1/4"
    assert cartan.Matrix.parse(str(q)).rows() == q.rows()

    g = cartan.Matrix.parse("field: gf:3\nn: 4\n0 0 0 2\n1 0 0 0\n0 1 0 1\n0 0 1 0\n")
    assert g.analyze().to_dict()["blocks"][0]["partition"] == {"parts": [2], "mults": [1]}

    p = cartan.cartan_profile("1,2,5")
    assert p["cartan"] == [[1, 1, 1], [1, 2, 2], [1, 2, 5]]
    assert p["cartan_det"] == 3 and p["global_dimension"] == "infinite"

    assert cartan.factor("t^2+1", field="gf:5") == [("t + 2", 1), ("t + 3", 1)]
    f = cartan.Poly("t^4 - 1")
    assert [(str(g), e) for g, e in f.factor()] == [("t - 1", 1), ("t + 1", 1), ("t^2 + 1", 1)]
    assert cartan.Poly("t^2+1", field="gf:3").is_irreducible()

    v = cartan.verify_instance("t^2+1", "2", field="gf:3")
    assert v["passed"] and v["centralizer_dim"] == 4
    batch = cartan.verify(10, seed=0, max_dim=6, field="gf:5")
    assert len(batch) == 10 and all(r["passed"] for r in batch)

    for bad in (lambda: cartan.Poly("t^", "q"), lambda: cartan.Matrix([[1, 2], [3]]),
                lambda: cartan.cartan_profile("2,2"), lambda: cartan.Matrix([[1]], field="gf:4")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("python smoke test passed")


if __name__ == "__main__":
    main()

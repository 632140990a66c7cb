"""Smoke test for the protoalg extension module.

    pip install --no-build-isolation -e crates/py
    python crates/py/python/smoke_test.py
"""

import protoalg
from protoalg import ProtoAlgorithm


def main():
    cd = ProtoAlgorithm.fixture("cd")
    for n in range(4):
        r = cd.run([n])
        assert r["outcome"] == {"outcome": "converged", "output": [0], "nas": 2 * n + 3}, r

    trace = cd.run([1], trace=True)["algorithmic_trace"]
    assert trace[0] == {"kind": "input", "value": [1]}
    assert cd.astep(trace[0]) == trace[1]

    again = ProtoAlgorithm.parse(cd.to_palg())
    assert again.to_palg() == cd.to_palg()
    assert "PROCESS" in cd.to_process()
    assert cd.cross_validate_steps()["mismatches"] == []

    a, b = ProtoAlgorithm.fixture("diamond_a"), ProtoAlgorithm.fixture("diamond_b")
    assert protoalg.isomorphism(a, b)["verdict"] == "refuted"
    assert protoalg.equivalence(a, b)["verdict"] == "proven"

    a, b = ProtoAlgorithm.fixture("cyc_a"), ProtoAlgorithm.fixture("cyc_b")
    assert protoalg.equivalence(a, b, kind="computational")["verdict"] == "proven"
    assert protoalg.equivalence(a, b)["verdict"] == "refuted"

    a, b = ProtoAlgorithm.fixture("swap_a"), ProtoAlgorithm.fixture("swap_b")
    assert protoalg.equivalence(a, b)["verdict"] == "proven"
    assert protoalg.prove_aeqv(a, b)["verdict"] == "method_inconclusive"

    base, variants = protoalg.generate_random(5)
    for tag, v in variants:
        if tag == "iso":
            assert protoalg.isomorphism(base, v)["verdict"] == "proven"

    diags = protoalg.diagnostics("")
    assert diags and diags[0]["code"] == "P001", diags
    try:
        ProtoAlgorithm.parse("ALPHABET\nfun ini fin\n")
    except ValueError:
        pass
    else:
        raise AssertionError("incomplete document accepted")

    report = protoalg.selftest(seed=0, count=5)
    assert report["failures"] == [], report
    print("smoke test passed:", len(ProtoAlgorithm.fixture_names()), "fixtures,", report["variants_checked"], "variants")


if __name__ == "__main__":
    main()

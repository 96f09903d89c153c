# ThetaBlocks, AGPL-3.0 license
import json

import pytest

import blocks
import borch
import grit
import hull
from cli import main


def test_usage_errors():
    assert main([]) == 2
    assert main(["train"]) == 2
    assert main(["blocks", "rotate"]) == 2  # argparse rejects the action
    assert main(["blocks", "classify", "--u", "19", "--d", "1,1"]) == 2


def test_blocks_json(capsys):
    assert main(["blocks", "classify", "--u", "18", "--d", "1,1", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert (out["k"], out["t"], out["v"]) == (10, 1, 1)
    assert out["classification"] == "cusp" and out["ord_min"] == "3/4"


def test_blocks_run():
    r = blocks.run("expand", 24, "", trunc=2)
    assert r["series"].coeff(2, 0) == -24
    q = blocks.run("quark", a=1, b=2, trunc=1)
    assert q["index"] == 7


def test_grit_coefficient():
    r = grit.run(18, "1,1", coeff="1,1,1")
    assert r["coefficient"] == 1
    exp = grit.run(18, "1,1", fjmax=2, trunc=2)
    assert exp.indices == (1, 2)


def test_borch_data(capsys):
    assert main(["borch", "data", "--u", "18", "--d", "1,1", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)["data"]
    assert (data["A"], data["C"], data["weight"]) == ("1", "1", "10")
    assert data["characterTrivial"] is True


def test_borch_divisor():
    r = borch.run("divisor", 12, "1,1,2,2", trunc=2)
    assert [str(h) for h in r["divisor"]] == ["2H_5(5,5)", "2H_5(4,2)", "4H_5(1,1)"]


def test_borch_compare():
    r = borch.run("compare", 18, "1,1", against="grit", fjmax=2, trunc=2)
    assert r["equal"]
    assert borch.run("compare", 12, "1,1,1,1", against="division", trunc=2)["equal"]
    assert main(["borch", "compare", "--u", "18", "--d", "1,1", "--against", "product", "--fjmax", "2"]) == 0


def test_borch_parity():
    r = borch.run("parity", v=8, refs=True)
    assert r["agree"] and r["reduction"].parity == 1
    assert r["ref"].startswith("D0 odd")


def test_borch_bad_input_exit():
    # v = 0 has no psi
    assert main(["borch", "psi", "--u", "0", "--d", ""]) == 2


def test_hull(capsys):
    assert main(["hull", "--u", "18", "--d", "1,1", "--trunc", "4", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert all(row["hull"] == row["formula"] for row in out["ord"])
    r = hull.run(check_mul=True, samples=20)
    assert r["passed"] and r["failures"] == {"laurent": 0, "jacobi": 0}


@pytest.mark.parametrize(
    "argv", [["verify", "weights", "--vmax", "1"], ["verify", "zagier", "--nmax", "1", "--rmax", "3"]]
)
def test_verify_exit(argv):
    assert main(argv) == 0


def test_paper_refs_alias(capsys):
    assert main(["borch", "data", "--u", "18", "--d", "1,1", "--paper-refs", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ref"] == borch.REFS["data"]
    assert main(["verify", "weights", "--vmax", "1", "--paper-refs", "--json"]) == 0
    assert all("ref" in x for x in json.loads(capsys.readouterr().out))

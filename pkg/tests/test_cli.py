import json
import subprocess
import sys

import pytest

from degseq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def data(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_decide(capsys):
    code, d = data(capsys, "decide", "--d", "2", "--b", "2,1")
    assert code == 0 and d["schema"] == "dsp/1" and d["status"] == "realizable"
    assert d["witness"]["d"] == 2
    code, d = data(capsys, "decide", "--d", "2", "--b", "3,3")
    assert code == 0 and d["status"] == "not_realizable"
    assert d["separator"]["c"] == ["1", "1"]


def test_decide_methods(capsys):
    code, d = data(capsys, "decide", "--b", "2,0", "--method", "dp")
    assert code == 0 and d["status"] == "not_realizable"
    code, d = data(capsys, "decide", "--b", "1,1", "--method", "auto", "--no-fallback")
    assert code == 2 and d["status"] == "undecided"
    code, d = data(capsys, "decide", "--b", "1,1,1", "--method", "lp")
    assert code == 0 and d["status"] == "realizable"


def test_exit_codes(capsys):
    code, d = data(capsys, "decide", "--d", "3", "--b", "2,1")
    assert code == 1 and d["status"] == "input_error"
    code, d = data(capsys, "decide", "--b", ",".join(["1"] * 98))
    assert code == 3 and d["status"] == "resource_limit"
    code, d = data(capsys, "decide", "--b", "20,20,20,20,20,20,20", "--method", "dp", "--oracle-max-states", "10")
    assert code == 3
    with pytest.raises(SystemExit) as info:
        main(["decide", "--b", "x"])
    assert info.value.code == 1


def test_passthroughs(capsys):
    code, d = data(capsys, "counterexample")
    assert code == 0 and d["certificate"]["conclusion"] is True
    code, d = data(capsys, "knapsack", "--a", "1,2", "--beta", "3")
    assert d["knapsack"] == {"N": 3, "opt1": "6", "opt2": "9/2"}
    code, d = data(capsys, "reduce3", "--d", "4", "--b", "1,1,1,0")
    assert d["reduced"] == {"d": 5, "point": [2, 10, 10, 10, 9]}
    code, d = data(capsys, "linopt", "--w", "1,-2")
    assert d["value"] == "1"
    code, d = data(capsys, "support", "--c", "1/2,1/2")
    assert d["value"] == "2"


def test_enumerate_and_sample(capsys):
    code, d = data(capsys, "enumerate", "--d", "3")
    assert code == 0 and d["counts"]["realizable"] == 59 and d["ok"]
    code, d = data(capsys, "enumerate", "--d", "6")
    assert code == 1
    code, out1 = run(capsys, "sample", "--d", "8", "--count", "20", "--seed", "3")
    code, out2 = run(capsys, "sample", "--d", "8", "--count", "20", "--seed", "3")
    assert out1 == out2
    assert json.loads(out1)["config"]["seed"] == 3


def test_text_format(capsys):
    code, out = run(capsys, "support", "--c", "1,1", "--format", "text")
    assert "value: 4" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "degseq", "support", "--c", "1,1"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["value"] == "4"

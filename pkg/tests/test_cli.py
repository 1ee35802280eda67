import json
import subprocess
import sys

import pytest

from twistgroup import group_lab, isogeny
from twistgroup.cli import main, run
from twistgroup.linalg import Mat
from twistgroup.mixed import ring_pair
from twistgroup.rings import GF
from twistgroup.suzuki import ALPHA, SuzukiGroup, c2_xroot


def write_matrix(tmp_path, m, name="m.json"):
    path = tmp_path / name
    path.write_text(json.dumps(m.to_json()))
    return str(path)


def test_lab_sz8_order():
    code, report, _ = run(["lab", "--group", "sz8", "--order"])
    assert code == 0
    assert report["result"] == {"order": 29120}
    assert report["status"] == "pass"


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        run(["suzuki", "--frobnicate"])
    assert info.value.code == 2


def test_missing_subcommand_exits_2():
    with pytest.raises(SystemExit) as info:
        run([])
    assert info.value.code == 2


def test_sz32_needs_opt_in():
    with pytest.raises(SystemExit) as info:
        run(["lab", "--group", "sz32"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        run(["suzuki", "--q", "32", "--order"])


def test_ree27_enumeration_is_refused():
    with pytest.raises(SystemExit) as info:
        run(["ree", "--q", "27", "--order"])
    assert info.value.code == 2


def test_suzuki_q2_order_and_census():
    code, report, _ = run(["suzuki", "--q", "2", "--order", "--bruhat-all"])
    assert code == 0
    assert report["result"]["order"] == 20
    census = next(c for c in report["checks"] if c["check"] == "bruhat_census")
    assert census["params"]["cells"] == {"1": 4, "w0": 16}


def test_ree_q3_derived_order():
    code, report, _ = run(["ree", "--q", "3", "--order", "--derived-order"])
    assert code == 0
    assert report["result"] == {"order": 1512, "derived_order": 504}


def test_relations_only():
    code, report, _ = run(["suzuki", "--q", "8", "--relations", "10"])
    assert code == 0
    assert all(c["params"]["samples"] == 10 for c in report["checks"])
    code, report, _ = run(["ree", "--relations", "3", "--seed", "5"])
    assert code == 0 and report["seed"] == "5"


def test_default_suzuki_battery():
    code, report, _ = run(["suzuki", "--ring", "gf32", "--samples", "5"])
    assert code == 0
    names = {c["check"] for c in report["checks"]}
    assert {"product", "mu_generator_law", "mu_squared_is_frobenius"} <= names


def test_check_element_failure_exits_1(tmp_path):
    path = write_matrix(tmp_path, c2_xroot(ALPHA, GF(2)(1)))
    code, report, _ = run(["suzuki", "--ring", "gf2", "--check-element", path])
    assert code == 1
    assert report["checks"][0]["status"] == "fail"
    assert "entry" in report["checks"][0]["witness"]


def test_check_element_success(tmp_path):
    R = GF(8)
    path = write_matrix(tmp_path, SuzukiGroup(R).xplus_mat(R.elem(3), R.elem(1)))
    code, _, _ = run(["suzuki", "--check-element", path])
    assert code == 0


def test_isogeny_theta_application(tmp_path):
    R = GF(4)
    g = isogeny.cn_xroot((1, -1), R.elem(2), 2)
    path = write_matrix(tmp_path, g)
    code, report, _ = run(["isogeny", "--theta", "--element", path])
    assert code == 0
    assert Mat.from_json(report["result"]["image"]) == isogeny.theta(g)


def test_isogeny_rho_rejects_bad_input(tmp_path):
    R = GF(4)
    path = write_matrix(tmp_path, isogeny.cn_xroot((1, -1), R.elem(2), 2))
    with pytest.raises(SystemExit) as info:
        run(["isogeny", "--theta"])
    assert info.value.code == 2
    code, report, _ = run(["isogeny", "--rho", "--element", path])
    # a 4x4 matrix is not an orthogonal B_n matrix
    assert code == 1
    assert report["checks"][0]["witness"]["error"].startswith("NotOrthogonal")


def test_isogeny_checks():
    code, report, _ = run(["isogeny", "--n", "3", "--ring", "f2t", "--check-frobenius", "5"])
    assert code == 0 and len(report["checks"]) == 2
    code, report, _ = run(["isogeny", "--n", "2", "--ring", "gf2", "--check-norm", "5"])
    assert code == 0 and report["checks"][0]["check"] == "norm_and_scliff"


def test_mixed_non_member_exits_1(tmp_path):
    F = ring_pair("f2t2-f2t").F
    t = F.elem(F.parse("t"))
    path = write_matrix(tmp_path, isogeny.bn_xroot((1, 0), t, 2))
    code, report, _ = run(["mixed", "--type", "bc", "--pair", "f2t2-f2t", "--check-element", path])
    assert code == 1
    assert report["result"] == {"member": False}


def test_mixed_default_battery():
    code, report, _ = run(["mixed", "--type", "g2"])
    assert code == 0 and report["checks"]


def test_limit_exceeded_exits_1(monkeypatch):
    monkeypatch.setattr(group_lab, "DEFAULT_LIMIT", 100)
    code, report, _ = run(["lab", "--group", "sz8", "--order"])
    assert code == 1 and "error" in report


def test_json_file_and_determinism(tmp_path, capsys):
    path = tmp_path / "out.json"
    args = ["suzuki", "--q", "8", "--relations", "5", "--seed", "7", "--json", str(path)]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    second = capsys.readouterr().out
    assert first == second
    assert path.read_text() == first


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "twistgroup.cli", "lab", "--group", "sz2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["order"] == 20
    proc = subprocess.run([sys.executable, "-m", "twistgroup.cli", "lab", "--bogus"], capture_output=True, text=True)
    assert proc.returncode == 2

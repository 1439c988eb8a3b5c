import json
import os
import runpy
import subprocess
import sys

import pytest

from dgtannaka.cli import SIGN_CONVENTION, JobError, JobSpec, main, run
from dgtannaka.examples import bundle_to_json, dual_numbers

HERE = os.path.dirname(__file__)
ROOT = os.path.dirname(HERE)
GOLDEN = os.path.join(HERE, "golden")
BUNDLED = runpy.run_path(os.path.join(ROOT, "scripts", "run_bundled.py"), run_name="bundled")


def cli(args, cwd=None, env=None):
    return subprocess.run([sys.executable, "-m", "dgtannaka"] + args, capture_output=True, text=True, cwd=cwd,
                          env=env)


def test_exit_codes(presentations, tmp_path):
    p = lambda n: os.path.join(presentations, n + ".json")
    assert main(["validate", p("dual_numbers")]) == 0
    assert main(["validate", p("corrupted")]) == 1
    assert main(["tannaka-dual", p("corrupted")]) == 1
    assert main(["validate", str(tmp_path / "missing.json")]) == 2
    (tmp_path / "bad.json").write_text("{not json")
    assert main(["validate", str(tmp_path / "bad.json")]) == 2
    assert main(["validate", p("k"), "--field", "Fp:4"]) == 2
    assert main(["tannaka-dual", p("k"), "--window", "3", "1"]) == 2
    assert main(["bialgebra", p("a2_quiver")]) == 2
    with pytest.raises(SystemExit):
        main(["frobnicate", p("k")])


def test_math_failure_still_writes_a_report(presentations, tmp_path):
    out = tmp_path / "r.json"
    assert main(["validate", os.path.join(presentations, "corrupted.json"), "--out", str(out)]) == 1
    doc = json.loads(out.read_text())
    assert doc["ok"] is False and "(e, e)" in doc["result"]["category"][0]
    # a parse error writes nothing
    out2 = tmp_path / "r2.json"
    assert main(["validate", str(tmp_path / "none.json"), "--out", str(out2)]) == 2
    assert not out2.exists()


def test_report_header(presentations):
    status, text = run(JobSpec("tannaka-dual", [os.path.join(presentations, "dual_numbers.json")], 2))
    doc = json.loads(text)
    assert status == 0
    assert doc["sign_convention"] == SIGN_CONVENTION
    assert doc["inputs"][0]["file"] == "dual_numbers.json" and len(doc["inputs"][0]["sha256"]) == 64
    assert text == json.dumps(doc, sort_keys=True, indent=2) + "\n"


def test_job_spec_checks():
    with pytest.raises(JobError):
        JobSpec("nope", ["x"]).check()
    with pytest.raises(JobError):
        JobSpec("validate", []).check()
    with pytest.raises(JobError):
        JobSpec("validate", ["x"], max_level=-1).check()


def test_field_override(presentations):
    status, text = run(JobSpec("tannaka-dual", [os.path.join(presentations, "dual_numbers.json")], 3,
                               field="Fp:3"))
    doc = json.loads(text)
    assert status == 0 and doc["result"]["coalgebra"]["field"] == {"Fp": 3}


def test_text_format_and_out(presentations, tmp_path):
    out = tmp_path / "o.txt"
    assert main(["hochschild", os.path.join(presentations, "k.json"), "--format", "text", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("command: hochschild") and "sign_convention: " + SIGN_CONVENTION in text


def test_separate_functor_file(tmp_path):
    from dgtannaka.dgcat import category_to_json, content_hash, functor_to_json
    b = dual_numbers()
    cdoc = category_to_json(b.category)
    (tmp_path / "c.json").write_text(json.dumps(cdoc))
    (tmp_path / "f.json").write_text(json.dumps(functor_to_json(b.functor, content_hash(cdoc))))
    status, text = run(JobSpec("tannaka-dual", [str(tmp_path / "c.json"), str(tmp_path / "f.json")], 3))
    assert status == 0
    assert [i["file"] for i in json.loads(text)["inputs"]] == ["c.json", "f.json"]
    # the binding is checked against the category as written, then the field is overridden
    status, text = run(JobSpec("tannaka-dual", [str(tmp_path / "c.json"), str(tmp_path / "f.json")], 3,
                               field="Fp:5"))
    assert status == 0 and json.loads(text)["result"]["coalgebra"]["field"] == {"Fp": 5}
    (tmp_path / "g.json").write_text(json.dumps(functor_to_json(b.functor, "0" * 64)))
    assert run(JobSpec("tannaka-dual", [str(tmp_path / "c.json"), str(tmp_path / "g.json")], 3,
                       field="Fp:5"))[0] == 2


def test_complex_documents(tmp_path):
    cx = {"field": "Q", "basis": {"0": ["a"], "1": ["b"]}, "d": [["a", "b", "2"]]}
    (tmp_path / "cx.json").write_text(json.dumps(cx))
    status, text = run(JobSpec("cohomology", [str(tmp_path / "cx.json")], window=(-1, 2)))
    assert status == 0
    assert json.loads(text)["result"] == {"cohomology": {"-1": 0, "0": 0, "1": 0, "2": 0}, "dims": {"0": 1, "1": 1}}
    assert run(JobSpec("validate", [str(tmp_path / "cx.json")]))[0] == 0


def test_cli_runs_as_a_module(presentations):
    r = cli(["validate", os.path.join(presentations, "z2_group.json")])
    assert r.returncode == 0 and json.loads(r.stdout)["ok"] is True


@pytest.mark.parametrize("cmd,name,extra", BUNDLED["HEADLINE"], ids=lambda v: v if isinstance(v, str) else "")
def test_golden_reports(cmd, name, extra, presentations):
    status, text = BUNDLED["run_job"](cmd, name, extra, presentations)
    with open(os.path.join(GOLDEN, BUNDLED["job_id"](cmd, name, extra) + ".json")) as fh:
        assert text == fh.read()


def test_bundle_documents_are_stable(presentations):
    with open(os.path.join(presentations, "dual_numbers.json")) as fh:
        assert json.load(fh) == json.loads(json.dumps(bundle_to_json(dual_numbers())))

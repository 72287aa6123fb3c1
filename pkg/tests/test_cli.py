import contextlib
import io
import os

import pytest

from apseq.cli import SequenceSpec, build_sequence, main
from apseq.errors import SpecError


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


TRACKER = """states: q0 q1
start: q0
alphabet: 0 1
q0 0 -> q0
q0 1 -> q1
q1 0 -> q0
q1 1 -> q1
accept-sets: {q0,q1}
"""

IDENTITY = """states: q0
start: q0
q0 0 -> 0 q0
q0 1 -> 1 q0
"""


@pytest.fixture
def tracker_file(tmp_path):
    path = tmp_path / "tracker.aut"
    path.write_text(TRACKER)
    return str(path)


# -- specs ---------------------------------------------------------------------


def test_spec_roundtrip():
    for text in ("thue_morse", "periodic period=01",
                 "mechanical alpha=invphi2 rho=invphi2 variant=lower",
                 "morphic rules=0:01,1:10 seed=0"):
        spec = SequenceSpec.parse(text)
        assert SequenceSpec.parse(spec.print()).print() == spec.print()


def test_spec_rejects_unknowns():
    with pytest.raises(SpecError):
        build_sequence(SequenceSpec.parse("martian"))
    with pytest.raises(SpecError):
        build_sequence(SequenceSpec.parse("periodic period=01 extra=1"))
    with pytest.raises(SpecError):
        build_sequence(SequenceSpec.parse("periodic"))


def test_all_parameterless_families_build():
    for text in ("thue_morse", "fibonacci", "kolakoski", "keane",
                 "alternating_prefix_example", "paperfolding"):
        x = build_sequence(SequenceSpec.parse(text))
        assert len(x.prefix(8)) == 8


# -- gen ------------------------------------------------------------------------


def test_gen_examples():
    code, out, _ = run(["gen", "--spec", "thue_morse", "--n", "32"])
    assert code == 0 and out.strip() == "01101001100101101001011001101001"
    code, out, _ = run(["gen", "--spec", "kolakoski", "--n", "23"])
    assert code == 0 and out.strip() == "22112122122112112212112"
    code, out, _ = run(["gen", "--spec", "periodic period=01", "--n", "4"])
    assert code == 0 and out.strip() == "0101"


def test_gen_deterministic():
    argv = ["gen", "--spec", "aperiodicity_witness k=5", "--n", "30"]
    assert run(argv) == run(argv)


def test_gen_multichar_symbols_comma_separated():
    code, out, _ = run(["gen", "--spec", "aperiodicity_witness k=12", "--n", "6"])
    assert code == 0 and out.strip().count(",") == 5


def test_gen_more_families():
    code, out, _ = run(["gen", "--spec", "toeplitz pattern=1_0_", "--n", "32"])
    assert out.strip() == "11011001110010011101100011001001"
    code, out, _ = run(["gen", "--spec",
                        "alternating_morphic rules=1:2,2:22|1:1,2:11 seed=2",
                        "--n", "23"])
    assert out.strip() == "22112122122112112212112"
    code, out, _ = run(["gen", "--spec", "eventually_periodic pre=1 period=0",
                        "--n", "5"])
    assert out.strip() == "10000"
    code, out, _ = run(["gen", "--spec",
                        "progression_rewrite base_period=01 n0=4 ratio=4",
                        "--n", "12"])
    assert code == 0 and len(out.strip()) == 12
    code, out, _ = run(["gen", "--spec", "block_product head=001 tail=0111",
                        "--n", "12"])
    assert out.strip() == "001110110110"
    code, out, _ = run(["gen", "--spec",
                        "mechanical alpha=1/2 rho=0 variant=lower", "--n", "6"])
    assert out.strip() == "010101"


# -- exit codes -------------------------------------------------------------------


def test_exit_codes(tmp_path, tracker_file):
    assert run(["gen", "--spec", "bogus", "--n", "4"])[0] == 2
    os.environ["APSEQ_HORIZON_CAP"] = "64"
    try:
        assert run(["gen", "--spec", "thue_morse", "--n", "1000"])[0] == 3
    finally:
        del os.environ["APSEQ_HORIZON_CAP"]
    bad = tmp_path / "bad.aut"
    bad.write_text("nonsense\n")
    assert run(["decide", "--automaton", str(bad), "--spec", "thue_morse"])[0] == 4
    assert run(["decide", "--automaton", tracker_file, "--spec", "kolakoski"])[0] == 5
    os.environ["APSEQ_HORIZON_CAP"] = "1000"
    try:
        assert run(["decide", "--automaton", tracker_file, "--spec", "thue_morse"])[0] == 6
    finally:
        del os.environ["APSEQ_HORIZON_CAP"]


# -- analyze -----------------------------------------------------------------------


def test_analyze_complexity_rows():
    code, out, _ = run(["analyze", "--spec", "fibonacci", "--metric", "complexity",
                        "--n-max", "10", "--horizon", "2000"])
    lines = out.strip().splitlines()
    assert lines[0] == "metric,param,value,kind,horizon"
    assert [int(l.split(",")[2]) for l in lines[1:]] == list(range(2, 12))
    assert all(l.split(",")[3] == "lower" for l in lines[1:])


def test_analyze_cube_rows_empty():
    code, out, _ = run(["analyze", "--spec", "thue_morse", "--metric", "powers",
                        "--kind", "cube", "--horizon", "20000"])
    assert code == 0 and out.strip().splitlines() == ["metric,param,value,kind,horizon"]


def test_analyze_am():
    code, out, _ = run(["analyze", "--spec", "thue_morse", "--metric", "am",
                        "--shifts", "64", "--horizon", "65536"])
    last = out.strip().splitlines()[-1]
    metric, shift, value, kind, horizon = last.split(",")
    assert metric == "am-min"
    num, den = value.split("/")
    assert abs(int(num) / int(den) - 1 / 3) < 0.02


def test_analyze_regulator_kinds():
    code, out, _ = run(["analyze", "--spec", "periodic period=01",
                        "--metric", "regulator", "--n-max", "3",
                        "--horizon", "1000"])
    rows = [l.split(",") for l in out.strip().splitlines()[1:]]
    assert [int(r[2]) for r in rows] == [2, 3, 4]
    assert all(r[3] == "empirical-lower" for r in rows)
    code, out, _ = run(["analyze", "--spec", "periodic period=01",
                        "--metric", "regulator", "--n-max", "3", "--certified"])
    rows = [l.split(",") for l in out.strip().splitlines()[1:]]
    assert all(r[3] == "certified-exact" for r in rows)
    assert [int(r[2]) for r in rows] == [2, 3, 4]


def test_analyze_quasiperiods_and_screen():
    code, out, _ = run(["analyze", "--spec", "fibonacci",
                        "--metric", "quasiperiods", "--length", "13"])
    assert code == 0 and any(",minimal," in l for l in out.splitlines())
    code, out, _ = run(["analyze", "--spec", "periodic period=011",
                        "--metric", "screen", "--horizon", "2000"])
    assert out.strip().splitlines()[-1].split(",")[3] == "confirmed"


def test_analyze_deterministic():
    argv = ["analyze", "--spec", "thue_morse", "--metric", "entropy",
            "--n-max", "12", "--horizon", "20000"]
    assert run(argv) == run(argv)


# -- transduce / decide / compare -----------------------------------------------------


def test_transduce(tmp_path):
    mach = tmp_path / "ident.fst"
    mach.write_text(IDENTITY)
    code, out, _ = run(["transduce", "--machine", str(mach),
                        "--spec", "fibonacci", "--n", "21"])
    assert code == 0 and out.strip() == "010010100100101001010"
    code, out, _ = run(["transduce", "--machine", str(mach),
                        "--spec", "periodic period=01", "--n", "4", "--emit-bound"])
    assert out.splitlines()[1] == "bound: 3 4 5 6 7 8 9 10"
    code, out, _ = run(["transduce", "--machine", str(mach),
                        "--spec", "fibonacci", "--n", "4", "--emit-bound"])
    assert out.splitlines()[1] == "bound: none"


def test_decide(tracker_file):
    code, out, _ = run(["decide", "--automaton", tracker_file, "--spec", "thue_morse"])
    assert code == 0
    assert out.splitlines()[0] == "ACCEPT"
    assert out.splitlines()[1] == "limit {q0,q1}"
    code, out, _ = run(["decide", "--automaton", tracker_file,
                        "--spec", "eventually_periodic pre=01 period=0"])
    assert out.splitlines()[0] == "REJECT"


def test_decide_scheme_file(tmp_path, tracker_file):
    sch = tmp_path / "pairs.scheme"
    sch.write_text("""kind: gap
base: 0 = 01
base: 1 = 10
expand: 0 = 010
expand: 1 = 101
pairs: 01 10
""")
    code, out, _ = run(["gen", "--spec", f"scheme file={sch}", "--n", "8"])
    assert code == 0 and out.strip() == "01100110"
    code, out, _ = run(["decide", "--automaton", tracker_file,
                        "--spec", f"scheme file={sch}"])
    assert code == 0 and out.splitlines()[0] == "ACCEPT"


def test_compare():
    code, out, _ = run(["compare", "--spec-a", "thue_morse definition=recurrence",
                        "--spec-b", "thue_morse definition=digit_sum",
                        "--horizon", "20000"])
    assert code == 0 and "agreement >= 20000" in out and "density 0" in out
    code, out, _ = run(["compare", "--spec-a", "thue_morse",
                        "--spec-b", "periodic period=01", "--horizon", "100"])
    assert "agreement 2" in out
    code, out, _ = run(["compare", "--spec-a", "kolakoski",
                        "--spec-b", "alternating_morphic rules=1:2,2:22|1:1,2:11 seed=2",
                        "--horizon", "20000"])
    assert "agreement >= 20000" in out

# tests/unit/test_cli.py
import json
from fractions import Fraction

import numpy as np
import pytest

from infinikit import hyperseq as hs
from infinikit.cli import classify_seq, fmt, parse_command
from infinikit.errors import UsageError
from utils.helpers import read_data_file


def test_parse_command_collects_inputs():
    c = parse_command(["--format", "doc", "spectrum", "--matrix", "m.txt", "--conjugate", "3"])
    assert c.subcommand == "spectrum"
    assert c.options["format"] == "doc"
    assert c.options["conjugate"] == 3
    assert c.inputs == ("m.txt",)


def test_parse_command_accepts_power_caps():
    c = parse_command(["dixmier", "--tail", "n^-1", "--cap", "2^12"])
    assert c.options["cap"] == 4096


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["dixmier", "--tail", "n^-1", "--tower"],
        ["dixmier", "--cap", "many", "--tower"],
    ],
)
def test_bad_command_lines_are_usage_errors(argv):
    with pytest.raises(UsageError):
        parse_command(argv)


def test_fmt():
    assert fmt(Fraction(-5, 4)) == "-5/4"
    assert fmt(Fraction(3)) == "3"
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(True) == "True"


def test_classify_seq():
    assert classify_seq(hs.ZERO) == "zero"
    assert classify_seq(hs.monomial(1, -1)) == "infinitesimal"
    assert classify_seq(hs.ONE + hs.monomial(1, -1)) == "appreciable-finite"
    assert classify_seq(hs.LN) == "infinite"
    parity = hs.seq([hs.RateClass(c=0, p=1, alt=1)]) + hs.ONE
    assert classify_seq(parity) == "infinite"


def test_doc_format_is_sorted_json(run_cli):
    result = run_cli("--format", "doc", "diff", "--f", "x^2", "--x0", "3")
    assert result.code == 0
    doc = json.loads(result.out)
    assert doc == {"continuous": True, "derivative": "6"}
    assert result.out.index('"continuous"') < result.out.index('"derivative"')


def test_verbose_logs_to_stderr(run_cli):
    result = run_cli("--verbose", "eval", "eps")
    assert result.out == "1*eps^1\n"
    assert "[infinikit.cli] dispatch eval eps" in result.err


def test_bad_option_value_is_bad_input(run_cli):
    result = run_cli("diff", "--f", "x^2", "--x0", "abc")
    assert result.code == 2
    assert result.err.startswith("bad-input:")


def test_unknown_subcommand_exit_code(run_cli):
    result = run_cli("frobnicate")
    assert result.code == 2
    assert result.err.startswith("usage:")


def test_seq_with_prefix(run_cli):
    result = run_cli("seq", "--expr", "n^-1", "--prefix", "{1:5}", "--samples", "2")
    assert result.code == 0
    assert "seq 1*n^-1 {1:5}" in result.out
    assert result.out.rstrip().endswith("head 5 0.5")


def test_st_of_divergent_sequence(run_cli):
    result = run_cli("st", "n")
    assert result.code == 1
    assert result.err.startswith("no-limit:")


def test_spectrum_conjugated_with_tail(run_cli, data_dir):
    result = run_cli(
        "spectrum", "--matrix", str(data_dir / "diag3.txt"), "--conjugate", "5", "--tail", "n^-2"
    )
    assert result.code == 0
    values = [float(v) for v in result.out.splitlines()[:3]]
    assert values == pytest.approx([1.0, 0.5, 0.25], abs=1e-12)
    assert result.out.splitlines()[-1] == "# tail: 1*n^-2"


def test_spectrum_rejects_ragged_matrix(run_cli, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1 2\n3\n", encoding="utf-8")
    result = run_cli("spectrum", "--matrix", str(path))
    assert result.code == 2
    assert result.err.startswith("bad-input:")


def test_dixmier_harmonic_tail(run_cli, tmp_path):
    data = tmp_path / "gamma.dat"
    result = run_cli("dixmier", "--tail", "n^-1", "--data", str(data))
    assert result.code == 0
    lines = result.out.splitlines()
    assert lines[0].split() == ["N", "gamma_N"]
    assert "measurable true" in lines
    value = next(line for line in lines if line.startswith("value "))
    assert float(value.split()[1]) == pytest.approx(1.0, rel=0.05)
    rows = read_data_file(data)
    assert rows[0][0] == 2 and rows[-1][0] == 2**20


def test_dixmier_tower_is_not_measurable(run_cli):
    result = run_cli("dixmier", "--tower")
    assert result.code == 0
    assert "measurable false" in result.out
    assert "value none" in result.out


def test_dixmier_with_short_cap_is_insufficient(run_cli):
    result = run_cli("dixmier", "--tail", "n^-1", "--cap", "4")
    assert result.code == 1
    assert result.err.startswith("insufficient-data:")


def test_bridge_text_output(run_cli, data_dir):
    result = run_cli(
        "bridge",
        "--matrix", str(data_dir / "harmonic4.txt"),
        "--tail", "n^-1",
        "--predicates", "gt10,evens,squares",
        "--seed", "7",
    )
    assert result.code == 0
    lines = result.out.splitlines()
    assert lines[0].startswith("[canonical] spectrum:")
    assert "[choice-dependent] filter_query: gt10=in_filter, evens=undecided, squares=undecided" in lines
    assert "gt10 in_filter" in lines
    assert "enclosure [1/2, 1] width 1/2" in lines


def test_bridge_seed_from_env(run_cli, data_dir):
    args = (
        "--format", "doc", "bridge",
        "--matrix", str(data_dir / "harmonic4.txt"),
        "--tail", "n^-1",
        "--predicates", "squares",
    )
    doc = json.loads(run_cli(*args, env={"INFINIKIT_SEED": "11"}).out)
    assert doc["seed"] == 11
    assert doc["queries"] == [["squares", "undecided"]]
    assert doc["enclosure"]["lo"] == "0" and doc["enclosure"]["hi"] == "1"


def test_bridge_non_compact_tail(run_cli, data_dir):
    result = run_cli(
        "bridge",
        "--matrix", str(data_dir / "harmonic4.txt"),
        "--tail", "ln(n)",
        "--predicates", "gt10",
        "--seed", "1",
    )
    assert result.code == 1
    assert result.err.startswith("bridge-stage: stage 'infinitesimal' failed (not-compact)")


def test_spectrum_of_random_symmetric_matrix(run_cli, matrix_file, rng):
    g = rng.standard_normal((5, 5))
    a = g + g.T
    result = run_cli("spectrum", "--matrix", str(matrix_file(a)))
    assert result.code == 0
    values = [float(v) for v in result.out.split()]
    expected = sorted(abs(np.linalg.eigvalsh(a)), reverse=True)
    assert values == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("tail", ["n^-1 + n^-2", "2*n^-1 - n^-2"])
def test_bridge_with_two_term_tail(run_cli, data_dir, tail):
    result = run_cli(
        "bridge",
        "--matrix", str(data_dir / "harmonic4.txt"),
        "--tail", tail,
        "--predicates", "gt10,evens",
        "--seed", "7",
    )
    assert result.code == 0, result.err
    assert "gt10 in_filter" in result.out.splitlines()
    assert "evens undecided" in result.out.splitlines()

import json
import subprocess
import sys
from pathlib import Path

import pytest

from lexsim import table1_path
from lexsim.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
HOMOGRAPHS = str(FIXTURES / "table1_homographs.csv")

WT_STIMULI = """stimulus,source_lang,target_lang,task,condition,rt_ms
AARDE,NL,EN,WT,control,520
AARDBEI,NL,EN,WT,control,610
ROOM,NL,EN,WT,ih,700
"""

LD_STIMULI = """stimulus,source_lang,target_lang,task,condition,rt_ms
AARDE,NL,,LD,,520
AAP,NL,,LD,,540
AARDIG,NL,,LD,,530
AANBOD,NL,,LD,,560
AARDBEI,NL,,LD,,605
"""


@pytest.fixture()
def stim_wt(tmp_path):
    path = tmp_path / "wt.csv"
    path.write_text(WT_STIMULI)
    return str(path)


@pytest.fixture()
def stim_ld(tmp_path):
    path = tmp_path / "ld.csv"
    path.write_text(LD_STIMULI)
    return str(path)


def run_cli(args):
    return subprocess.run([sys.executable, "-m", "lexsim.cli", *args],
                          capture_output=True, text=True)


def test_simulate_writes_outcomes(stim_wt, tmp_path, capsys):
    out = tmp_path / "out.csv"
    code = main(["simulate", "--lexicon", HOMOGRAPHS, "--stimuli", stim_wt,
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# manifest sha256:")
    assert lines[1].split(",")[0] == "stimulus"
    room = [l for l in lines if l.startswith("ROOM")][0]
    assert ",krim," in room
    manifest = json.loads((tmp_path / "out.csv.manifest.json").read_text())
    assert manifest["command"] == "simulate"
    assert manifest["deterministic"] is True


def test_simulate_stdout_and_set_override(stim_wt, capsys):
    code = main(["simulate", "--lexicon", HOMOGRAPHS, "--stimuli", stim_wt,
                 "--set", "OO_gamma=-0.0001"])
    assert code == 0
    text = capsys.readouterr().out
    assert text.startswith("# manifest sha256:")
    assert "str$b@rI" in text


def test_unknown_parameter_lists_valid_names(stim_wt, capsys):
    code = main(["simulate", "--lexicon", HOMOGRAPHS, "--stimuli", stim_wt,
                 "--set", "WRONG=1"])
    assert code == 1
    err = capsys.readouterr().err
    assert "unknown parameter" in err
    assert "OO_gamma" in err and "criterion_value" in err


def test_parameter_file_overridden_by_set(stim_wt, tmp_path, capsys):
    # the file caps the run at 30 cycles (AARDBEI needs 32); the --set flag
    # wins over the file and restores the default limit
    pfile = tmp_path / "params.txt"
    pfile.write_text("OO_gamma = -0.01\nmax_cycles = 30\n")
    code = main(["simulate", "--lexicon", HOMOGRAPHS, "--stimuli", stim_wt,
                 "--params", str(pfile)])
    assert code == 0
    capped = capsys.readouterr().out
    assert "AARDBEI,WT,NL,EN,none" in capped

    code = main(["simulate", "--lexicon", HOMOGRAPHS, "--stimuli", stim_wt,
                 "--params", str(pfile), "--set", "max_cycles=40",
                 "--set", "OO_gamma=-0.001"])
    assert code == 0
    restored = capsys.readouterr().out
    assert "AARDBEI,WT,NL,EN,symbol,str$b@rI,32" in restored


def test_missing_lexicon_is_input_error(stim_wt, capsys):
    code = main(["simulate", "--lexicon", "/nonexistent.csv", "--stimuli", stim_wt])
    assert code == 1


def test_fit_subcommand_summary(stim_ld, tmp_path, capsys):
    log = tmp_path / "fit.csv"
    code = main(["fit", "--lexicon", HOMOGRAPHS, "--stimuli", stim_ld,
                 "--domain=-1:0", "--n", "5", "--epsilon", "1e-3",
                 "--log", str(log)])
    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    assert {"best_value", "best_fitness", "iterations", "manifest_sha256"} <= set(summary)
    header = log.read_text().splitlines()[1]
    assert header == "iteration,window_lo,window_hi,point,fitness"


def test_stats_subcommand(stim_ld, capsys):
    code = main(["stats", "--lexicon", str(table1_path()), "--stimuli", stim_ld,
                 "--gammas", "0,-0.1"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "gamma,cycle,ortho,phono,sem,overall"
    assert len(lines) == 2 + 2 * 40


def test_bench_subcommand(stim_ld, capsys):
    code = main(["bench", "--lexicon", str(table1_path()), "--stimuli", stim_ld,
                 "--repeats", "2"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1].startswith("engine,")


def test_dump_network_json(capsys):
    code = main(["dump-network", "--lexicon", str(table1_path())])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["nodes"]) == 53
    pools = {n["pool"] for n in payload["nodes"]}
    assert pools == {"input", "ortho", "phono", "sem", "lang"}


def test_byte_identical_reruns_with_jobs(stim_wt):
    args = ["simulate", "--lexicon", HOMOGRAPHS, "--stimuli", stim_wt, "--jobs", "8"]
    first = run_cli(args)
    second = run_cli(args)
    serial = run_cli(args[:-2])
    assert first.returncode == second.returncode == serial.returncode == 0
    assert first.stdout == second.stdout == serial.stdout


def test_trace_export(stim_wt, tmp_path):
    trace = tmp_path / "trace.csv"
    code = main(["simulate", "--lexicon", HOMOGRAPHS, "--stimuli", stim_wt,
                 "--out", str(tmp_path / "o.csv"), "--trace", str(trace),
                 "--trace-top-k", "6"])
    assert code == 0
    lines = trace.read_text().splitlines()
    assert lines[1] == "cycle,node_id,pool,language,symbol,activation"
    node_ids = {line.split(",")[1] for line in lines[2:]}
    assert len(node_ids) == 6

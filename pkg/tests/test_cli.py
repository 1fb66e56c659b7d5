import io

import numpy as np
import pytest

from uwofdm import cli
from uwofdm.config import default_80211a_like, save_config
from uwofdm.sequences import load_sequence, zadoff_chu


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    return code, out.getvalue()


@pytest.fixture
def cfg_file(tmp_path):
    path = tmp_path / "sys.cfg"
    save_config(default_80211a_like(), path)
    return str(path)


def test_matrices(cfg_file, tmp_path):
    code, text = run(["matrices", "--config", cfg_file, "--out-dir", str(tmp_path / "m")])
    assert code == 0
    rows = dict(line.split(",") for line in text.strip().splitlines()[1:])
    assert int(rows["n_data"]) == 36
    assert float(rows["m22_condition"]) > 1
    t = np.loadtxt(tmp_path / "m" / "t_matrix.csv", delimiter=",", skiprows=1)
    assert t.shape == (16 * 36, 4)


def test_energy(cfg_file):
    code, text = run(["energy", "--config", cfg_file, "--uw", "zero", "--uw", "zc:1"])
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0] == "label,approach,e_d,e_r,e_u,e_total,excess,db_vs_two_step"
    assert len(lines) == 5
    zc_direct = lines[4].split(",")
    assert zc_direct[1] == "direct" and float(zc_direct[7]) > 0


def test_sequence_roundtrip(tmp_path):
    path = tmp_path / "zc.txt"
    code, _ = run(["sequence", "--kind", "zadoff-chu", "--length", "16", "--root", "3",
                   "--out", str(path)])
    assert code == 0
    assert np.allclose(load_sequence(path, 16).samples, zadoff_chu(16, 3).samples)


def test_ber(cfg_file, tmp_path):
    out = tmp_path / "ber.csv"
    code, _ = run(["ber", "--config", cfg_file, "--uw", "zc:1", "--approach", "two_step,direct",
                   "--ebn0", "0:4:2", "--seed", "1", "--min-errors", "100",
                   "--max-bits", "20000", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "ebn0_db,approach,uw_label,bits,errors,ber"
    assert len(lines) == 7


def test_exit_codes(tmp_path, cfg_file):
    bad = tmp_path / "bad.cfg"
    bad.write_text(open(cfg_file).read().replace("n_red = 16", "n_red = 15"))
    assert run(["matrices", "--config", str(bad)])[0] == 1
    assert run(["energy", "--uw", "zc:2"])[0] == 1
    assert run(["matrices", "--config", str(tmp_path / "missing.cfg")])[0] == 3
    clustered = tmp_path / "clustered.cfg"
    clustered.write_text(
        "n_total = 128\nn_uw = 32\nn_red = 32\nn_data = 96\nzero_carrier_indices =\n"
        "redundant_carrier_indices = " + ",".join(str(k) for k in range(1, 33)) + "\n")
    assert run(["matrices", "--config", str(clustered)])[0] == 2


def test_usage_error_is_validation_exit():
    with pytest.raises(SystemExit) as info:
        cli.main(["ber", "--ebn0", "3:1:1"])
    assert info.value.code == 1

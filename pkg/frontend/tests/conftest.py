import subprocess
from pathlib import Path

import pytest


def run_fluctlab(*args) -> None:
    proc = subprocess.run(["fluctlab", *map(str, args)],
                          capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"fluctlab {' '.join(map(str, args))} failed: {proc.stderr}")


@pytest.fixture(scope="session")
def artifacts(tmp_path_factory) -> Path:
    """CLI-produced inputs: classification sweeps, a sample run, tables."""
    root = tmp_path_factory.mktemp("fluctlab-artifacts")
    for gamma in (0.5, 1.0, 2.0):
        run_fluctlab("classify", "--model", "lpp", "--gamma", gamma,
                     "--grid", "96", "--out", root / f"regions_{gamma}.csv",
                     "--curves", root / f"curves_{gamma}.csv")
    run_fluctlab("simulate", "--model", "lpp", "--spec", "two-sided",
                 "--pi", "0.3", "--eta", "0.8", "--gamma", "1.0", "--n", "300",
                 "--replicas", "1200", "--seed", "1401", "--out", root / "gauss.csv")
    run_fluctlab("simulate", "--model", "lpp", "--spec", "two-sided",
                 "--pi", "0.9", "--eta", "0.9", "--gamma", "1.0", "--n", "400",
                 "--replicas", "1200", "--seed", "1402", "--out", root / "gue.csv")
    run_fluctlab("twtab", "--family", "GUE", "--order", "64",
                 "--out", root / "gue_table.tsv")
    return root

#!/usr/bin/env python3
"""Smoke test for the cayley_py extension module.

Builds the cdylib with cargo, copies it next to this script under the
importable name, and exercises the bound API end to end.
"""

import json
import shutil
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build():
    subprocess.run(
        ["cargo", "build", "-p", "cayley-py"], cwd=ROOT, check=True
    )
    suffix = {"linux": ".so", "darwin": ".dylib"}.get(sys.platform, ".so")
    built = ROOT / "target" / "debug" / f"libcayley_py{suffix}"
    dest = Path(__file__).parent / "cayley_py.so"
    shutil.copyfile(built, dest)


def main():
    build()
    sys.path.insert(0, str(Path(__file__).parent))
    import cayley_py as cp

    # group algebra: s r s = r^{-1} in D_10
    r = cp.Element("r^1", 5)
    s = cp.Element("s", 5)
    assert s * r * s == r.inv()
    assert r.order() == 5 and s.order() == 2
    assert str(r * s) == "s*r^4"  # r s = s r^{-1} in canonical form

    cls = json.loads(cp.classify(7, ["r^1", "r^6", "s", "s*r^3"]))
    assert cls["derived"]["case"] == "III"
    assert cls["derived"]["d"] == 1

    rep = json.loads(cp.analyze(5, ["s", "s*r^1", "s*r^2", "s*r^3"]))
    assert rep["verified"] is True
    assert rep["special"] == "crown"

    assert cp.aut_order(7, ["r^1", "r^6", "r^2", "r^5"]) == "392"

    aut = json.loads(cp.aut_report(5, ["r^1", "r^4", "s", "s*r^1"]))
    assert aut["order"] == "20"
    assert aut["normal"] is True and aut["consistent"] is True

    ver = json.loads(cp.verify("thm5.2", json.dumps({"n": 3, "k": 1})))
    assert ver["verdict"] == "refuted"
    assert ver["observed"]["aut_order"] == "48"

    ver = json.loads(cp.verify("cor3.12", json.dumps({"p": 7})))
    assert ver["verdict"] == "verified"

    try:
        cp.classify(6, ["r^1", "r^2"])
    except ValueError as e:
        assert "inverse" in str(e)
    else:
        raise AssertionError("invalid set must raise ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()

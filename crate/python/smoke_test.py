"""Smoke test for the wakimoto extension module."""

import json
import pathlib

import wakimoto

CONFIGS = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "configs"


def main():
    r = wakimoto.Realization.from_file(str(CONFIGS / "sl2_twisted_n2.toml"), level="5/7")
    assert (r.dim, r.order, r.level) == (3, 2, "5/7"), r
    print(r)
    for line in r.currents():
        print("  J =", line)
    theta = r.theta()
    assert any(t != "0" for t in theta), theta
    built = json.loads(r.to_json())
    assert built["dim"] == 3 and len(built["twisted_currents"]) == 3
    report = json.loads(r.verify(checks=["mode_algebra", "sugawara", "twisted"]))
    assert report["passed"], report
    c = [ch["values"]["central_charge"] for lv in report["levels"] for ch in lv["checks"] if ch["name"] == "sugawara"]
    assert c and all(x == "15/19" for x in c), c
    try:
        wakimoto.Realization("name = 1")
    except ValueError as e:
        print("bad config rejected:", str(e).splitlines()[0])
    else:
        raise AssertionError("bad config accepted")
    sl4 = wakimoto.Realization.from_file(str(CONFIGS / "sl4_nu.toml"))
    assert sl4.dim == 15 and sl4.y == "5"
    print("ok")


if __name__ == "__main__":
    main()

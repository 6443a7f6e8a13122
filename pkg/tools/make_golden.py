"""Regenerate the CLI golden outputs under tests/golden."""

import contextlib
import io
import pathlib
import sys

from planext.cli import main

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden"

CASES = {
    "check_cube.txt": ["check", "catalog:cube"],
    "faces_cube.txt": ["faces", "catalog:cube"],
    "extend_cube_w.txt": ["extend", "catalog:cube", "catalog:W"],
    "cube_demo_w.txt": ["cube-demo", "catalog:W"],
    "pinwheel_1_2.txt": ["pinwheel", "1", "2"],
    "random8_seed3.txt": ["catalog", "random8", "--seed", "3"],
}


def run(argv: list[str]) -> tuple[int, str]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


if __name__ == "__main__":
    GOLDEN.mkdir(exist_ok=True)
    for name, argv in CASES.items():
        code, out = run(argv)
        if code != 0:
            sys.exit(f"{name}: exit {code}")
        (GOLDEN / name).write_text(out)
        print(f"wrote {name}")

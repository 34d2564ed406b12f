"""Synthetic Java test corpus with a planted execution-cost model.

Each generated file is a compilable class whose test methods mix plain
statements, branches, helper calls, and literal-bound loop nests. The
label is a deterministic weighted cost of those ingredients times
lognormal run noise, so the signal is recoverable from graph structure by
construction: statement, call, and loop counts shape the AST, and loop
bounds surface as literal tokens.
"""

from pathlib import Path

import numpy as np

from ..errors import ConfigError

RUNS_PER_FILE = 3
NOISE_SIGMA = 0.05

BASE_COST = 40.0
STMT_COST = 3.0
CALL_COST = 8.0
NEST_COST = 1.0  # per nest: NEST_COST * depth * product(bounds)

LOOP_BOUNDS = (2, 3, 4, 5)
OPS = ("+", "-", "*")


class _FileBuilder:
    """Accumulates lines and the cost-model counters for one file."""

    def __init__(self, class_name, rng):
        self.class_name = class_name
        self.rng = rng
        self.lines = []
        self.statements = 0
        self.calls = 0
        self.nest_units = 0.0  # sum of depth * product(bounds)
        self.tmp_counter = 0

    def emit(self, depth, text):
        self.lines.append("    " * depth + text)

    def statement(self, depth, var="acc"):
        """One arithmetic statement mutating state."""
        self.statements += 1
        roll = self.rng.integers(0, 3)
        op = OPS[self.rng.integers(0, len(OPS))]
        lit = int(self.rng.integers(1, 10))
        if roll == 0:
            name = f"tmp{self.tmp_counter}"
            self.tmp_counter += 1
            self.emit(depth, f"int {name} = {var} {op} {lit};")
            return name
        if roll == 1:
            self.emit(depth, f"{var} = {var} {op} {lit};")
        else:
            self.emit(depth, f"{var} = {var} {op} ({var} % {lit + 1});")
        return var

    def call(self, depth, helper, arg="acc"):
        self.calls += 1
        self.statements += 1
        self.emit(depth, f"acc = acc + {helper}({arg});")

    def branch(self, depth, helpers):
        self.statements += 1  # the condition check itself
        mod = int(self.rng.integers(2, 5))
        self.emit(depth, f"if (acc % {mod} == 0) {{")
        self.statement(depth + 1)
        self.emit(depth, "} else {")
        if self.rng.integers(0, 2) and helpers:
            self.call(depth + 1, helpers[self.rng.integers(0, len(helpers))])
        else:
            self.statement(depth + 1)
        self.emit(depth, "}")

    def loop_nest(self, depth, helpers):
        levels = int(self.rng.integers(1, 4))
        bounds = [
            int(LOOP_BOUNDS[self.rng.integers(0, len(LOOP_BOUNDS))])
            for _ in range(levels)
        ]
        product = 1
        for b in bounds:
            product *= b
        self.nest_units += levels * product
        for lv, bound in enumerate(bounds):
            var = f"i{lv}"
            self.emit(
                depth + lv,
                f"for (int {var} = 0; {var} < {bound}; {var}++) {{",
            )
        body_depth = depth + levels
        self.statement(body_depth)
        if self.rng.integers(0, 2) and helpers:
            self.call(
                body_depth,
                helpers[self.rng.integers(0, len(helpers))],
                arg=f"i{levels - 1}",
            )
        for lv in reversed(range(levels)):
            self.emit(depth + lv, "}")

    def cost(self):
        return (
            BASE_COST
            + STMT_COST * self.statements
            + CALL_COST * self.calls
            + NEST_COST * self.nest_units
        )


def _helper_method(fb, name):
    fb.emit(1, f"static int {name}(int x) {{")
    fb.emit(2, "int acc = x;")
    for _ in range(int(fb.rng.integers(1, 4))):
        fb.statement(2)
    fb.emit(2, "return acc;")
    fb.emit(1, "}")
    fb.emit(0, "")


def _case_method(fb, name, helpers):
    fb.emit(1, f"public static void {name}() {{")
    fb.emit(2, "int acc = 1;")
    for _ in range(int(fb.rng.integers(2, 9))):
        fb.statement(2)
    for _ in range(int(fb.rng.integers(0, 3))):
        fb.branch(2, helpers)
    for _ in range(int(fb.rng.integers(0, 3))):
        fb.loop_nest(2, helpers)
    for _ in range(int(fb.rng.integers(0, 4))):
        fb.call(2, helpers[fb.rng.integers(0, len(helpers))])
    fb.emit(2, "state = acc;")
    fb.emit(1, "}")
    fb.emit(0, "")


def generate_file(class_name, rng):
    """(source text, true cost) for one synthetic test class."""
    fb = _FileBuilder(class_name, rng)
    fb.emit(0, f"public class {class_name} {{")
    fb.emit(1, "static int state = 0;")
    fb.emit(0, "")
    n_helpers = int(rng.integers(1, 4))
    helpers = [f"helper{i}" for i in range(n_helpers)]
    for h in helpers:
        _helper_method(fb, h)
    n_cases = int(rng.integers(1, 4))
    cases = [f"case{chr(ord('A') + i)}" for i in range(n_cases)]
    for c in cases:
        _case_method(fb, c, helpers)
    fb.emit(1, "public static void main(String[] args) {")
    for c in cases:
        fb.emit(2, f"{c}();")
    fb.emit(1, "}")
    fb.emit(0, "}")
    return "\n".join(fb.lines) + "\n", fb.cost()


def gen_synthetic(n_files, seed, out_dir):
    """Write n_files classes plus labels.csv; byte-identical per seed.

    labels.csv holds RUNS_PER_FILE rows per file (path,duration_ms), each
    run the planted cost times lognormal noise. Returns (source paths,
    labels path).
    """
    if n_files < 20:
        raise ConfigError(f"need at least 20 synthetic files, got {n_files}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    label_rows = []
    for i in range(n_files):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        class_name = f"Test{i:04d}"
        source, cost = generate_file(class_name, rng)
        path = out_dir / f"{class_name}.java"
        path.write_text(source)
        paths.append(path)
        for _ in range(RUNS_PER_FILE):
            noise = float(np.exp(NOISE_SIGMA * rng.standard_normal()))
            label_rows.append((f"{class_name}.java", cost * noise))
    labels_path = out_dir / "labels.csv"
    with open(labels_path, "w", newline="") as fh:
        fh.write("path,duration_ms\n")
        for path, value in label_rows:
            fh.write("%s,%.3f\n" % (path, value))
    return paths, labels_path

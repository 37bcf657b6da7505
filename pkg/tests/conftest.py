import pathlib

import pytest

SAMPLES = pathlib.Path(__file__).resolve().parent.parent / "samples"

# Minimal module: a single empty main.
EXAMPLE_A = """
define i32 @main() {
entry:
  ret i32 0
}
"""

# Counted loop summing 0..9; the standard hand-count oracle used across
# the interpreter, predictor and trace tests.
EXAMPLE_B = """
define i32 @main() {
entry:
  br label %loop

loop:
  %i = phi i32 [ 0, %entry ], [ %i.next, %loop ]
  %s = phi i32 [ 0, %entry ], [ %s.next, %loop ]
  %s.next = add i32 %s, %i
  %i.next = add i32 %i, 1
  %cond = icmp slt i32 %i.next, 10
  br i1 %cond, label %loop, label %exit

exit:
  ret i32 %s.next
}
"""


@pytest.fixture
def example_a():
    from irtime import parse_module
    return parse_module(EXAMPLE_A, source_name="example_a")


@pytest.fixture
def example_b():
    from irtime import parse_module
    return parse_module(EXAMPLE_B, source_name="example_b")


@pytest.fixture
def samples_dir():
    return SAMPLES

"""Parse an IR file and walk its structure.

The parser turns textual IR into a module of functions, blocks, and
instructions with dense static ids.  Nothing executes here; this is the
static view every other stage builds on.
"""

from pathlib import Path

from irtime import parse_file

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def main():
    module = parse_file(SAMPLES / "bubble_sort.ll")
    print(f"module: {module.source_name}")
    print(f"globals: {[g.name for g in module.globals]}")
    print(f"static instructions: {module.instruction_count()}")
    print()

    for func in module.functions:
        params = ", ".join(f"%{name}" for name, _ in func.params)
        print(f"define @{func.name}({params})")
        for block in func.blocks:
            preds = f"  preds={block.preds}" if block.preds else ""
            print(f"  {block.label}:{preds}")
            for ins in block.instructions:
                print(f"    [{ins.static_id:>2}] {ins.summary()}")
    print()

    # the control flow graph is explicit on each block
    func = module.function("main")
    print("successor map:")
    for block in func.blocks:
        print(f"  {block.label} -> {block.succs}")


if __name__ == "__main__":
    main()

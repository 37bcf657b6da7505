"""Execute a program and read the trace it leaves behind.

One run produces an ExecutionTrace: block entry counts, per-opcode totals,
cache and branch outcomes, byte volumes of the memory routines, and the
diagnostics.  The 42-component feature vector is a fixed projection of it.
"""

from pathlib import Path

from irtime import (
    FEATURE_NAMES, Interpreter, ProbeSet, extract_features, parse_file, run,
)

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def main():
    module = parse_file(SAMPLES / "dot_product.ll")

    # plain execution just gives the return value
    value = Interpreter(module).execute("main")
    print(f"dot product returned {value}")
    print()

    # run() wires up the cache, the predictor, and the trace probes
    trace = run(module)
    print("block entries:")
    for name, count in sorted(trace.block_counts.items()):
        print(f"  {name:<24} {count}")
    print()
    print("hot opcodes:")
    for op, count in sorted(trace.op_counts.items(), key=lambda kv: -kv[1]):
        print(f"  {op:<16} {count}")
    print()
    print(f"loads:    {trace.load_hit} hit / {trace.load_miss} miss")
    print(f"stores:   {trace.store_hit} hit / {trace.store_miss} miss")
    print(f"branches: {trace.br_hit} hit / {trace.br_miss} miss / "
          f"{trace.br_uncond} unconditional")
    print(f"cold instructions: {trace.inst_miss}, block jumps: {trace.bb_jump}")
    print()

    features = extract_features(trace)
    nonzero = [(n, v) for n, v in zip(FEATURE_NAMES, features.values) if v]
    print("nonzero feature components:")
    for name, v in nonzero:
        print(f"  {name:<16} {v}")
    print()

    # probes observe without changing anything; they see dense static ids,
    # so a recount needs the module's id-to-name map
    names = {b.static_id: f"{f.name}:{b.label}"
             for f in module.functions for b in f.blocks}
    seen = {}

    def on_block(block_id):
        name = names[block_id]
        seen[name] = seen.get(name, 0) + 1

    run(module, probes=ProbeSet(block_enter=on_block))
    assert seen == trace.block_counts
    print("probe recount matches the trace")


if __name__ == "__main__":
    main()

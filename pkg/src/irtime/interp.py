"""Execution-driven interpreter for the IR subset.

Values live in virtual registers per call frame; memory is a flat 32-bit
space with three bump-allocated regions (globals, stack, heap) at fixed
bases so traces are reproducible run to run.  Integer arithmetic wraps in
two's complement at the operand width, float arithmetic runs in IEEE double
and results of `float`-typed operations are rounded to 32-bit precision.

Probes observe execution without affecting it: block entries, executed
instructions, loads/stores with concrete addresses, conditional branch
outcomes, block transitions, memory-routine volumes, and calls.  The
memcpy/memset/calloc/malloc routines move bytes but bypass the load/store
probes; they report a single volume event instead, mirroring how the
feature table accounts for them.
"""

import math
import struct
from dataclasses import dataclass

from .errors import (
    InterpreterError, StepLimitExceeded, OutOfBoundsAccess, DivisionByZero,
    StackOverflow, HeapExhausted, InvalidConfigError, UnresolvedReferenceError,
)
from .irtypes import VOID, gep_offset
from .irmodel import (
    Const, LocalRef, GlobalRef, ConstGep,
    mem_intrinsic_kind, is_noop_intrinsic, HEAP_FUNCTIONS,
)
from .cache import CacheModel, CacheConfig
from .branch import BranchPredictorTable, PredictorState
from .trace import TraceBuilder, ExecutionTrace

GLOBAL_BASE = 0x1000_0000
STACK_BASE = 0x2000_0000
HEAP_BASE = 0x3000_0000
REGION_SPAN = 0x1000_0000

_MASK32 = 0xFFFF_FFFF


@dataclass(frozen=True)
class RunLimits:
    max_steps: int = 100_000_000
    max_stack_bytes: int = 16 * 1024 * 1024
    max_heap_bytes: int = 64 * 1024 * 1024

    def validate(self) -> None:
        if self.max_steps <= 0:
            raise InvalidConfigError("max_steps must be positive")
        if not 0 < self.max_stack_bytes <= REGION_SPAN:
            raise InvalidConfigError("max_stack_bytes out of range")
        if not 0 < self.max_heap_bytes <= REGION_SPAN:
            raise InvalidConfigError("max_heap_bytes out of range")


class ProbeSet:
    """Optional callbacks fired during interpretation.

    block_enter(block_id), instruction(static_id, opcode),
    load(addr, nbytes), store(addr, nbytes), cond_branch(site_id, taken),
    block_transition(from_id, to_id), mem_intrinsic(kind, nbytes),
    call(callee_name).
    """

    __slots__ = ("block_enter", "instruction", "load", "store", "cond_branch",
                 "block_transition", "mem_intrinsic", "call")

    def __init__(self, block_enter=None, instruction=None, load=None, store=None,
                 cond_branch=None, block_transition=None, mem_intrinsic=None,
                 call=None):
        self.block_enter = block_enter
        self.instruction = instruction
        self.load = load
        self.store = store
        self.cond_branch = cond_branch
        self.block_transition = block_transition
        self.mem_intrinsic = mem_intrinsic
        self.call = call


class _Region:
    __slots__ = ("name", "base", "cap", "data", "shadow", "top")

    def __init__(self, name, base, cap):
        self.name = name
        self.base = base
        self.cap = cap
        self.data = bytearray()
        self.shadow = bytearray()   # 1 where a byte has been written
        self.top = 0

    def allocate(self, size, align):
        top = (self.top + align - 1) // align * align
        new_top = top + max(size, 1)
        if new_top > self.cap:
            return None
        if new_top > len(self.data):
            grow = new_top - len(self.data)
            self.data.extend(bytes(grow))
            self.shadow.extend(bytes(grow))
        self.top = new_top
        return self.base + top

    def release_to(self, mark):
        if mark < self.top:
            self.data[mark:self.top] = bytes(self.top - mark)
            self.shadow[mark:self.top] = bytes(self.top - mark)
            self.top = mark


class MemoryImage:
    """Three bump regions; reads return zeros for allocated-but-unwritten
    bytes and report that so the run can flag uninitialized loads."""

    def __init__(self, limits: RunLimits):
        self.globals = _Region("globals", GLOBAL_BASE, REGION_SPAN)
        self.stack = _Region("stack", STACK_BASE, limits.max_stack_bytes)
        self.heap = _Region("heap", HEAP_BASE, limits.max_heap_bytes)
        self.global_addrs = {}

    def _locate(self, addr, nbytes):
        for region in (self.globals, self.stack, self.heap):
            if region.base <= addr < region.base + REGION_SPAN:
                off = addr - region.base
                if off + nbytes > region.top:
                    raise OutOfBoundsAccess(addr, nbytes)
                return region, off
        raise OutOfBoundsAccess(addr, nbytes)

    def read(self, addr, nbytes):
        region, off = self._locate(addr, nbytes)
        end = off + nbytes
        uninit = 0 in region.shadow[off:end]
        return bytes(region.data[off:end]), uninit

    def write(self, addr, data):
        region, off = self._locate(addr, len(data))
        end = off + len(data)
        region.data[off:end] = data
        region.shadow[off:end] = b"\x01" * len(data)

    def copy(self, dst, src, nbytes):
        if nbytes == 0:
            return
        sregion, soff = self._locate(src, nbytes)
        dregion, doff = self._locate(dst, nbytes)
        payload = bytes(sregion.data[soff:soff + nbytes])
        written = bytes(sregion.shadow[soff:soff + nbytes])
        dregion.data[doff:doff + nbytes] = payload
        dregion.shadow[doff:doff + nbytes] = written

    def fill(self, dst, byte, nbytes):
        if nbytes == 0:
            return
        region, off = self._locate(dst, nbytes)
        region.data[off:off + nbytes] = bytes([byte & 0xFF]) * nbytes
        region.shadow[off:off + nbytes] = b"\x01" * nbytes


# --- numeric helpers ---------------------------------------------------------


def _signed(v, bits):
    return v - (1 << bits) if v >= 1 << (bits - 1) else v


def _to_f32(x):
    try:
        return struct.unpack("<f", struct.pack("<f", x))[0]
    except OverflowError:
        return math.copysign(math.inf, x)


def _trunc_div(a, b):
    q = abs(a) // abs(b)
    return -q if (a < 0) != (b < 0) else q


def _fdiv(a, b):
    if b == 0.0:
        if a == 0.0 or math.isnan(a):
            return math.nan
        return math.copysign(math.inf, math.copysign(1.0, a) * math.copysign(1.0, b))
    return a / b


_ICMP = {
    "eq": lambda a, b, bits: a == b,
    "ne": lambda a, b, bits: a != b,
    "ugt": lambda a, b, bits: a > b,
    "uge": lambda a, b, bits: a >= b,
    "ult": lambda a, b, bits: a < b,
    "ule": lambda a, b, bits: a <= b,
    "sgt": lambda a, b, bits: _signed(a, bits) > _signed(b, bits),
    "sge": lambda a, b, bits: _signed(a, bits) >= _signed(b, bits),
    "slt": lambda a, b, bits: _signed(a, bits) < _signed(b, bits),
    "sle": lambda a, b, bits: _signed(a, bits) <= _signed(b, bits),
}

_FCMP_ORDERED = {
    "oeq": lambda a, b: a == b,
    "ogt": lambda a, b: a > b,
    "oge": lambda a, b: a >= b,
    "olt": lambda a, b: a < b,
    "ole": lambda a, b: a <= b,
    "one": lambda a, b: a != b,
}


def _fcmp(pred, a, b):
    unordered = math.isnan(a) or math.isnan(b)
    if pred == "false":
        return False
    if pred == "true":
        return True
    if pred == "ord":
        return not unordered
    if pred == "uno":
        return unordered
    if pred in _FCMP_ORDERED:
        return (not unordered) and _FCMP_ORDERED[pred](a, b)
    # u-prefixed: true when unordered, otherwise the base comparison
    return unordered or _FCMP_ORDERED["o" + pred[1:]](a, b)


def _type_bits(ty):
    return 32 if ty.kind == "ptr" else ty.int_bits


def _encode(value, ty):
    if ty.kind == "float":
        return struct.pack("<f", _to_f32(value))
    if ty.kind == "double":
        return struct.pack("<d", value)
    bits = _type_bits(ty)
    return (value & ((1 << bits) - 1)).to_bytes(ty.size(), "little")


def _decode(data, ty):
    if ty.kind == "float":
        return struct.unpack("<f", data)[0]
    if ty.kind == "double":
        return struct.unpack("<d", data)[0]
    value = int.from_bytes(data, "little")
    if ty.kind == "i1":
        return value & 1
    return value


class _Frame:
    __slots__ = ("func", "block", "ip", "regs", "prev_label", "stack_mark", "ret_reg")

    def __init__(self, func, regs, stack_mark, ret_reg=None):
        self.func = func
        self.block = None
        self.ip = 0
        self.regs = regs
        self.prev_label = None
        self.stack_mark = stack_mark
        self.ret_reg = ret_reg


class Interpreter:
    """Drives one module.  Use execute() for the raw return value; the
    module-level run() wraps an interpreter with the standard trace probes."""

    def __init__(self, module, probes=(), limits: RunLimits | None = None):
        if isinstance(probes, ProbeSet):
            probes = (probes,)
        self.module = module
        self.limits = limits or RunLimits()
        self.limits.validate()
        self.memory = MemoryImage(self.limits)
        self.steps = 0
        self.uninitialized_loads = 0
        self._frames = []
        self._last_block = None
        self._result = None
        probes = [p for p in probes if p is not None]
        self._on_block_enter = [p.block_enter for p in probes if p.block_enter]
        self._on_instruction = [p.instruction for p in probes if p.instruction]
        self._on_load = [p.load for p in probes if p.load]
        self._on_store = [p.store for p in probes if p.store]
        self._on_cond_branch = [p.cond_branch for p in probes if p.cond_branch]
        self._on_transition = [p.block_transition for p in probes if p.block_transition]
        self._on_mem_intrinsic = [p.mem_intrinsic for p in probes if p.mem_intrinsic]
        self._on_call = [p.call for p in probes if p.call]
        self._dispatch = self._build_dispatch()
        self._setup_globals()

    # --- setup --------------------------------------------------------------

    def _setup_globals(self):
        mem = self.memory
        for g in self.module.globals:
            size = g.type.size()
            align = max(g.align, g.type.alignment())
            addr = mem.globals.allocate(size, align)
            if addr is None:
                raise InterpreterError(f"global storage exhausted at '@{g.name}'")
            mem.global_addrs[g.name] = addr
        for g in self.module.globals:
            addr = mem.global_addrs[g.name]
            self._write_init(addr, g.type, g.init)
            region, off = mem._locate(addr, max(g.type.size(), 1))
            size = max(g.type.size(), 1)
            region.shadow[off:off + size] = b"\x01" * size

    def _write_init(self, addr, ty, init):
        mem = self.memory
        if init is None or init == ("zero",):
            return
        if isinstance(init, bytes):
            payload = init[: ty.size()]
            region, off = mem._locate(addr, max(len(payload), 1))
            region.data[off:off + len(payload)] = payload
            return
        if isinstance(init, GlobalRef):
            mem.write(addr, _encode(mem.global_addrs[init.name], ty))
            return
        if isinstance(init, ConstGep):
            base = mem.global_addrs[init.base.name]
            mem.write(addr, _encode((base + init.offset) & _MASK32, ty))
            return
        if isinstance(init, list):
            if ty.kind == "array":
                stride = ty.elem.size()
                for i, item in enumerate(init):
                    self._write_init(addr + i * stride, ty.elem, item)
            elif ty.kind == "struct":
                for i, item in enumerate(init):
                    self._write_init(addr + ty.field_offset(i), ty.fields[i], item)
            else:
                raise InterpreterError(f"aggregate initializer for scalar type {ty!r}")
            return
        mem.write(addr, _encode(init, ty))

    # --- value plumbing -------------------------------------------------------

    def _value(self, fr, op):
        cls = op.__class__
        if cls is LocalRef:
            try:
                return fr.regs[op.name]
            except KeyError:
                raise UnresolvedReferenceError(op.name, "register") from None
        if cls is Const:
            return op.value
        if cls is GlobalRef:
            try:
                return self.memory.global_addrs[op.name]
            except KeyError:
                raise UnresolvedReferenceError(op.name, "global") from None
        if cls is ConstGep:
            base = self.memory.global_addrs[op.base.name]
            return (base + op.offset) & _MASK32
        raise InterpreterError(f"cannot evaluate operand {op!r}")

    def _enter_block(self, fr, label):
        block = fr.func.block_map.get(label)
        if block is None:
            raise UnresolvedReferenceError(label, "label")
        if self._last_block is not None:
            last = self._last_block
            for h in self._on_transition:
                h(last, block.static_id)
        self._last_block = block.static_id
        for h in self._on_block_enter:
            h(block.static_id)
        fr.prev_label = fr.block.label if fr.block is not None else None
        fr.block = block
        fr.ip = block.phi_count
        if block.phi_count:
            phis = block.instructions[:block.phi_count]
            staged = []
            for p in phis:
                try:
                    incoming = p.incoming_map[fr.prev_label]
                except KeyError:
                    raise InterpreterError(
                        f"phi %{p.result} has no incoming value for predecessor "
                        f"'%{fr.prev_label}'"
                    ) from None
                staged.append(self._value(fr, incoming))
            limit = self.limits.max_steps
            for p, v in zip(phis, staged):
                self.steps += 1
                if self.steps > limit:
                    raise StepLimitExceeded(limit)
                for h in self._on_instruction:
                    h(p.static_id, "phi")
                fr.regs[p.result] = v

    # --- main loop ---------------------------------------------------------

    def execute(self, entry: str = "main", args=()):
        """Run `entry` to completion and return its return value."""
        func = self.module.function(entry)
        regs = {}
        if args and len(args) != len(func.params):
            raise InterpreterError(
                f"entry '@{entry}' takes {len(func.params)} arguments, got {len(args)}"
            )
        for i, (pname, pty) in enumerate(func.params):
            if args:
                regs[pname] = args[i]
            else:
                regs[pname] = 0.0 if pty.is_float() else 0
        frame = _Frame(func, regs, self.memory.stack.top)
        self._frames = [frame]
        self._last_block = None
        self._result = None
        self._enter_block(frame, func.entry.label)

        frames = self._frames
        dispatch = self._dispatch
        limit = self.limits.max_steps
        on_inst = self._on_instruction
        while frames:
            fr = frames[-1]
            ins = fr.block.instructions[fr.ip]
            fr.ip += 1
            self.steps += 1
            if self.steps > limit:
                raise StepLimitExceeded(limit)
            for h in on_inst:
                h(ins.static_id, ins.opcode)
            dispatch[ins.opcode](fr, ins)
        return self._result

    # --- opcode handlers -------------------------------------------------------

    def _build_dispatch(self):
        d = {}
        for op in ("add", "sub", "mul", "udiv", "sdiv", "urem", "srem",
                   "and", "or", "xor", "shl", "lshr", "ashr"):
            d[op] = self._make_int_binop(op)
        for op in ("fadd", "fsub", "fmul", "fdiv"):
            d[op] = self._make_float_binop(op)
        d.update({
            "icmp": self._do_icmp, "fcmp": self._do_fcmp, "fneg": self._do_fneg,
            "zext": self._do_zext, "sext": self._do_sext,
            "fptosi": self._do_fptosi, "uitofp": self._do_uitofp,
            "sitofp": self._do_sitofp,
            "alloca": self._do_alloca, "load": self._do_load,
            "store": self._do_store, "getelementptr": self._do_gep,
            "phi": self._do_phi_unexpected,
            "call": self._do_call, "br": self._do_br,
            "switch": self._do_switch, "ret": self._do_ret,
        })
        return d

    def _make_int_binop(self, op):
        value = self._value

        def sdiv_fn(a, b, bits):
            sa, sb = _signed(a, bits), _signed(b, bits)
            if sb == 0:
                raise DivisionByZero()
            return _trunc_div(sa, sb)

        def srem_fn(a, b, bits):
            sa, sb = _signed(a, bits), _signed(b, bits)
            if sb == 0:
                raise DivisionByZero("integer remainder by zero")
            return sa - sb * _trunc_div(sa, sb)

        def udiv_fn(a, b, bits):
            if b == 0:
                raise DivisionByZero()
            return a // b

        def urem_fn(a, b, bits):
            if b == 0:
                raise DivisionByZero("integer remainder by zero")
            return a % b

        fns = {
            "add": lambda a, b, bits: a + b,
            "sub": lambda a, b, bits: a - b,
            "mul": lambda a, b, bits: a * b,
            "and": lambda a, b, bits: a & b,
            "or": lambda a, b, bits: a | b,
            "xor": lambda a, b, bits: a ^ b,
            "shl": lambda a, b, bits: a << b if b < bits else 0,
            "lshr": lambda a, b, bits: a >> b if b < bits else 0,
            "ashr": lambda a, b, bits: _signed(a, bits) >> min(b, bits - 1),
            "udiv": udiv_fn, "sdiv": sdiv_fn, "urem": urem_fn, "srem": srem_fn,
        }
        fn = fns[op]

        def handler(fr, ins):
            bits = ins.type.int_bits
            a = value(fr, ins.operands[0])
            b = value(fr, ins.operands[1])
            fr.regs[ins.result] = fn(a, b, bits) & ((1 << bits) - 1)

        return handler

    def _make_float_binop(self, op):
        value = self._value
        fns = {
            "fadd": lambda a, b: a + b,
            "fsub": lambda a, b: a - b,
            "fmul": lambda a, b: a * b,
            "fdiv": _fdiv,
        }
        fn = fns[op]

        def handler(fr, ins):
            a = value(fr, ins.operands[0])
            b = value(fr, ins.operands[1])
            out = fn(a, b)
            if ins.type.kind == "float":
                out = _to_f32(out)
            fr.regs[ins.result] = out

        return handler

    def _do_icmp(self, fr, ins):
        bits = _type_bits(ins.operands[0].type)
        a = self._value(fr, ins.operands[0])
        b = self._value(fr, ins.operands[1])
        fr.regs[ins.result] = 1 if _ICMP[ins.pred](a, b, bits) else 0

    def _do_fcmp(self, fr, ins):
        a = self._value(fr, ins.operands[0])
        b = self._value(fr, ins.operands[1])
        fr.regs[ins.result] = 1 if _fcmp(ins.pred, a, b) else 0

    def _do_fneg(self, fr, ins):
        fr.regs[ins.result] = -self._value(fr, ins.operands[0])

    def _do_zext(self, fr, ins):
        fr.regs[ins.result] = self._value(fr, ins.operands[0])

    def _do_sext(self, fr, ins):
        src_bits = ins.source_type.int_bits
        dst_bits = ins.type.int_bits
        v = _signed(self._value(fr, ins.operands[0]), src_bits)
        fr.regs[ins.result] = v & ((1 << dst_bits) - 1)

    def _do_fptosi(self, fr, ins):
        f = self._value(fr, ins.operands[0])
        bits = ins.type.int_bits
        v = 0 if not math.isfinite(f) else int(f)
        fr.regs[ins.result] = v & ((1 << bits) - 1)

    def _do_uitofp(self, fr, ins):
        out = float(self._value(fr, ins.operands[0]))
        fr.regs[ins.result] = _to_f32(out) if ins.type.kind == "float" else out

    def _do_sitofp(self, fr, ins):
        bits = ins.source_type.int_bits
        out = float(_signed(self._value(fr, ins.operands[0]), bits))
        fr.regs[ins.result] = _to_f32(out) if ins.type.kind == "float" else out

    def _do_alloca(self, fr, ins):
        count = self._value(fr, ins.operands[0])
        size = ins.source_type.size() * count
        align = max(ins.align, ins.source_type.alignment())
        addr = self.memory.stack.allocate(size, align)
        if addr is None:
            raise StackOverflow(self.limits.max_stack_bytes)
        fr.regs[ins.result] = addr

    def _do_load(self, fr, ins):
        addr = self._value(fr, ins.operands[0])
        nbytes = ins.type.size()
        data, uninit = self.memory.read(addr, nbytes)
        if uninit:
            self.uninitialized_loads += 1
        for h in self._on_load:
            h(addr, nbytes)
        fr.regs[ins.result] = _decode(data, ins.type)

    def _do_store(self, fr, ins):
        value = self._value(fr, ins.operands[0])
        addr = self._value(fr, ins.operands[1])
        data = _encode(value, ins.type)
        self.memory.write(addr, data)
        for h in self._on_store:
            h(addr, len(data))

    def _do_gep(self, fr, ins):
        base = self._value(fr, ins.operands[0])
        indices = []
        for op in ins.operands[1:]:
            raw = self._value(fr, op)
            indices.append(_signed(raw, op.type.int_bits))
        fr.regs[ins.result] = (base + gep_offset(ins.source_type, indices)) & _MASK32

    def _do_phi_unexpected(self, fr, ins):
        raise InterpreterError("phi outside block entry; module was not linked")

    def _do_br(self, fr, ins):
        if ins.operands:
            taken = self._value(fr, ins.operands[0]) != 0
            for h in self._on_cond_branch:
                h(ins.static_id, taken)
            self._enter_block(fr, ins.labels[0] if taken else ins.labels[1])
        else:
            self._enter_block(fr, ins.labels[0])

    def _do_switch(self, fr, ins):
        v = self._value(fr, ins.operands[0])
        target = ins.labels[0]
        for cval, lbl in ins.cases:
            if cval == v:
                target = lbl
                break
        self._enter_block(fr, target)

    def _do_ret(self, fr, ins):
        value = self._value(fr, ins.operands[0]) if ins.operands else None
        self.memory.stack.release_to(fr.stack_mark)
        self._frames.pop()
        if self._frames:
            caller = self._frames[-1]
            if fr.ret_reg is not None:
                if value is None:
                    raise InterpreterError(
                        f"'@{fr.func.name}' returned void but the caller expects a value"
                    )
                caller.regs[fr.ret_reg] = value
        else:
            self._result = value

    def _do_call(self, fr, ins):
        callee = ins.callee
        for h in self._on_call:
            h(callee)
        kind = mem_intrinsic_kind(callee)
        if kind is not None:
            self._do_mem_routine(fr, ins, kind)
            return
        if callee in HEAP_FUNCTIONS:
            self._do_heap_routine(fr, ins, callee)
            return
        if is_noop_intrinsic(callee):
            return
        func = self.module.function(callee)
        if len(ins.operands) != len(func.params):
            raise InterpreterError(
                f"call to '@{callee}' passes {len(ins.operands)} arguments, "
                f"function takes {len(func.params)}"
            )
        regs = {}
        for (pname, _), op in zip(func.params, ins.operands):
            regs[pname] = self._value(fr, op)
        frame = _Frame(func, regs, self.memory.stack.top,
                       ret_reg=ins.result)
        self._frames.append(frame)
        self._enter_block(frame, func.entry.label)

    def _do_mem_routine(self, fr, ins, kind):
        if kind == "memcpy":
            dst = self._value(fr, ins.operands[0])
            src = self._value(fr, ins.operands[1])
            n = self._value(fr, ins.operands[2])
            self.memory.copy(dst, src, n)
        else:
            dst = self._value(fr, ins.operands[0])
            byte = self._value(fr, ins.operands[1])
            n = self._value(fr, ins.operands[2])
            self.memory.fill(dst, byte, n)
        for h in self._on_mem_intrinsic:
            h(kind, n)
        if ins.result is not None:
            fr.regs[ins.result] = dst

    def _do_heap_routine(self, fr, ins, callee):
        if callee == "free":
            return
        if callee == "malloc":
            nbytes = self._value(fr, ins.operands[0])
        else:  # calloc
            nbytes = self._value(fr, ins.operands[0]) * self._value(fr, ins.operands[1])
        addr = self.memory.heap.allocate(nbytes, 8)
        if addr is None:
            raise HeapExhausted(self.limits.max_heap_bytes)
        if callee == "calloc":
            region, off = self.memory._locate(addr, max(nbytes, 1))
            region.shadow[off:off + max(nbytes, 1)] = b"\x01" * max(nbytes, 1)
        for h in self._on_mem_intrinsic:
            h(callee, nbytes)
        if ins.result is not None:
            fr.regs[ins.result] = addr


def run(module, entry: str = "main", probes: ProbeSet | None = None,
        limits: RunLimits | None = None, cache: CacheModel | None = None,
        predictor: BranchPredictorTable | None = None,
        cache_config: CacheConfig | None = None,
        predictor_initial_state: PredictorState | None = None) -> ExecutionTrace:
    """Simulate `entry` and return the accumulated ExecutionTrace.

    A fresh cache and predictor are created unless instances are passed in;
    either way both models are reset once the entry function returns, so a
    following run starts cold.  Extra probes observe the same event stream
    the trace is built from.
    """
    if cache is None:
        cache = CacheModel(cache_config or CacheConfig())
    if predictor is None:
        predictor = BranchPredictorTable(predictor_initial_state or PredictorState.WNT)
    builder = TraceBuilder(module, cache, predictor)
    probe_list = [ProbeSet(
        block_enter=builder.on_block_enter,
        instruction=builder.on_instruction,
        load=builder.on_load,
        store=builder.on_store,
        cond_branch=builder.on_cond_branch,
        block_transition=builder.on_block_transition,
        mem_intrinsic=builder.on_mem_intrinsic,
    )]
    if probes is not None:
        probe_list.append(probes)
    interp = Interpreter(module, probe_list, limits)
    interp.execute(entry)
    trace = builder.build(uninitialized_loads=interp.uninitialized_loads)
    cache.reset()
    predictor.reset()
    return trace

"""Types of the interpreted IR subset and their in-memory layout.

The target is a 32-bit machine: pointers are 4 bytes, aggregates use natural
alignment (every field is padded to its own alignment, the aggregate is
padded to the alignment of its widest member).
"""

from dataclasses import dataclass, field

from .errors import ParseError

POINTER_BYTES = 4

_INT_BITS = {"i1": 1, "i8": 8, "i16": 16, "i32": 32, "i64": 64}
_SCALAR_SIZE = {
    "i1": 1, "i8": 1, "i16": 2, "i32": 4, "i64": 8,
    "float": 4, "double": 8, "ptr": POINTER_BYTES,
}


@dataclass(frozen=True)
class IrType:
    """One type of the subset.

    kind is 'void', 'i1'..'i64', 'float', 'double', 'ptr', 'array', or
    'struct'.  Pointers are opaque: the pointee never matters for layout,
    and load/store/getelementptr all carry an explicit value type.
    """

    kind: str
    elem: "IrType | None" = None          # array element
    count: int = 0                        # array length
    fields: tuple = field(default=())     # struct members
    name: str = ""                        # original name for named structs

    def __repr__(self):
        if self.kind == "array":
            return f"[{self.count} x {self.elem!r}]"
        if self.kind == "struct":
            if self.name:
                return self.name
            return "{" + ", ".join(repr(f) for f in self.fields) + "}"
        return self.kind

    @property
    def int_bits(self) -> int:
        return _INT_BITS[self.kind]

    def is_int(self) -> bool:
        return self.kind in _INT_BITS

    def is_float(self) -> bool:
        return self.kind in ("float", "double")

    def size(self) -> int:
        """Allocated size in bytes, padding included."""
        if self.kind in _SCALAR_SIZE:
            return _SCALAR_SIZE[self.kind]
        if self.kind == "array":
            return self.count * self.elem.size()
        if self.kind == "struct":
            off = 0
            for f in self.fields:
                off = _align_up(off, f.alignment()) + f.size()
            return _align_up(off, self.alignment())
        raise ParseError(f"type {self.kind} has no size")

    def alignment(self) -> int:
        if self.kind in _SCALAR_SIZE:
            return _SCALAR_SIZE[self.kind]
        if self.kind == "array":
            return self.elem.alignment()
        if self.kind == "struct":
            return max((f.alignment() for f in self.fields), default=1)
        raise ParseError(f"type {self.kind} has no alignment")

    def field_offset(self, index: int) -> int:
        """Byte offset of struct member `index`."""
        if self.kind != "struct":
            raise ParseError(f"field access into non-struct type {self!r}")
        if not 0 <= index < len(self.fields):
            raise ParseError(f"struct field index {index} out of range for {self!r}")
        off = 0
        for i, f in enumerate(self.fields):
            off = _align_up(off, f.alignment())
            if i == index:
                return off
            off += f.size()
        raise AssertionError("unreachable")


def _align_up(value: int, alignment: int) -> int:
    return (value + alignment - 1) // alignment * alignment


def gep_offset(source_type: IrType, indices) -> int:
    """Byte offset computed the way getelementptr does: the first index
    scales by the full source type, later indices step into arrays and
    structs.  Indices are signed Python ints."""
    if not indices:
        return 0
    offset = indices[0] * source_type.size()
    cur = source_type
    for idx in indices[1:]:
        if cur.kind == "array":
            offset += idx * cur.elem.size()
            cur = cur.elem
        elif cur.kind == "struct":
            offset += cur.field_offset(idx)
            cur = cur.fields[idx]
        else:
            raise ParseError(f"cannot index into type {cur!r}")
    return offset


VOID = IrType("void")
I1 = IrType("i1")
I8 = IrType("i8")
I16 = IrType("i16")
I32 = IrType("i32")
I64 = IrType("i64")
FLOAT = IrType("float")
DOUBLE = IrType("double")
PTR = IrType("ptr")

SCALARS = {
    "void": VOID, "i1": I1, "i8": I8, "i16": I16, "i32": I32, "i64": I64,
    "float": FLOAT, "double": DOUBLE, "ptr": PTR,
}


def array_of(elem: IrType, count: int) -> IrType:
    return IrType("array", elem=elem, count=count)


def struct_of(fields, name: str = "") -> IrType:
    return IrType("struct", fields=tuple(fields), name=name)

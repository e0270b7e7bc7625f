"""Text forms of complex numbers and grids, shared by the CLI and the API.

Complex grammar (spaces anywhere are ignored, ``j`` is accepted for ``i``)::

    z     := real | imag | real sign imag
    imag  := [number] "i"          e.g.  i, -i, 2i, 0.5i, 1e-3i
    real  := number                e.g.  1, -2.5, 1e3
"""

import math
import re

from .errors import ValidationError

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"^(?P<re>[+-]?{_NUM})?(?:(?P<sign>[+-])?(?P<im>{_NUM})?(?P<unit>[ij]))?$")


def parse_complex(text) -> complex:
    """Parse ``a+bi`` style text; numbers are passed through unchanged."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    s = re.sub(r"\s+", "", str(text))
    m = _COMPLEX_RE.match(s)
    if not s or m is None or (m.group("re") is None and m.group("unit") is None):
        raise ValidationError(f"cannot parse complex number {text!r} (expected a+bi)")
    re_part = float(m.group("re")) if m.group("re") else 0.0
    im_part = 0.0
    if m.group("unit"):
        if m.group("re") is not None and m.group("sign") is None:
            # "2i" was consumed as real part followed by a bare unit
            im_part, re_part = re_part, 0.0
        else:
            mag = float(m.group("im")) if m.group("im") else 1.0
            im_part = -mag if m.group("sign") == "-" else mag
    z = complex(re_part, im_part)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValidationError(f"complex number {text!r} is not finite")
    return z


def format_complex(z: complex) -> str:
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real:.17g}{sign}{abs(z.imag):.17g}i"


def parse_grid(text) -> list:
    """``a:b:step`` (inclusive of b up to rounding) or a comma list."""
    s = str(text).strip()
    if ":" in s:
        parts = s.split(":")
        if len(parts) != 3:
            raise ValidationError(f"grid {text!r} must be start:stop:step")
        try:
            a, b, h = (float(x) for x in parts)
        except ValueError:
            raise ValidationError(f"grid {text!r} has non-numeric bounds") from None
        if h <= 0 or b < a:
            raise ValidationError(f"grid {text!r} needs step > 0 and stop >= start")
        n = int(math.floor((b - a) / h + 1e-9))
        return [a + k * h for k in range(n + 1)]
    try:
        vals = [float(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"grid {text!r} is not a comma list of numbers") from None
    if not vals:
        raise ValidationError("grid is empty")
    return vals

"""JSON serialization for the package's domain objects.

Complex numbers travel as [re, im] pairs (a bare number is accepted on input
as a real).  Parsers validate shapes and reject unknown keys with
InvalidInput so the CLI can map schema problems to its parse-error exit code.
Serializers emit canonical, deterministically ordered structures: the same
object always produces the same bytes through json.dumps(sort_keys=True).
"""

from __future__ import annotations

from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from .algebra import HomogPoly, Poly, QuadForm, grade_dim, monomial_index, monomials
from .conic import BinaryForm, ProjPoint1, ProjPoint2, RootCluster
from .deconstruct import MultipoleSequence
from .errors import InvalidInput
from .planar import ConicDivisor, PencilDivisor
from .sylvester import GeneralizedParcelling, Multipole, MultipoleFactorization


def _cnum(z: complex) -> List[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _parse_cnum(v: Any, where: str) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if (isinstance(v, list) and len(v) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool)
                    for x in v)):
        return complex(v[0], v[1])
    raise InvalidInput("%s: expected a number or [re, im] pair" % where)


def _check_keys(obj: Dict[str, Any], allowed: Sequence[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise InvalidInput("%s: expected an object" % where)
    unknown = set(obj) - set(allowed)
    if unknown:
        raise InvalidInput("%s: unknown keys %s" % (where, sorted(unknown)))


# ---------------------------------------------------------------------------
# polynomials: {"degree": d, "terms": [{"exp": [a,b,c], "re": r, "im": s}]}

def poly_to_json(p) -> Dict[str, Any]:
    """Serialize a Poly or HomogPoly; zero coefficients are omitted."""
    parts = p.parts if isinstance(p, Poly) else Poly.from_homog(p).parts
    terms = []
    for part in parts:
        for mono, c in zip(monomials(part.degree), part.coeffs):
            c = complex(c)
            if c == 0:
                continue
            terms.append({"exp": list(mono), "re": float(c.real),
                          "im": float(c.imag)})
    return {"degree": len(parts) - 1, "terms": terms}


def poly_from_json(obj: Any) -> Poly:
    _check_keys(obj, ("degree", "terms"), "polynomial")
    if "degree" not in obj or "terms" not in obj:
        raise InvalidInput("polynomial: needs 'degree' and 'terms'")
    d = obj["degree"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 0:
        raise InvalidInput("polynomial: degree must be a non-negative integer")
    if not isinstance(obj["terms"], list):
        raise InvalidInput("polynomial: terms must be a list")
    coeffs = {k: np.zeros(grade_dim(k), dtype=complex) for k in range(d + 1)}
    for t in obj["terms"]:
        _check_keys(t, ("exp", "re", "im"), "polynomial term")
        e = t.get("exp")
        if (not isinstance(e, list) or len(e) != 3
                or any(not isinstance(x, int) or isinstance(x, bool) or x < 0
                       for x in e)):
            raise InvalidInput("polynomial term: exp must be three"
                               " non-negative integers")
        k = sum(e)
        if k > d:
            raise InvalidInput("polynomial term: exponent %s exceeds the"
                               " stated degree %d" % (e, d))
        re = t.get("re", 0.0)
        im = t.get("im", 0.0)
        for name, v in (("re", re), ("im", im)):
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise InvalidInput("polynomial term: %s must be a number"
                                   % name)
        coeffs[k][monomial_index(k)[tuple(e)]] += complex(re, im)
    return Poly([HomogPoly(k, coeffs[k]) for k in range(d + 1)])


def homog_from_json(obj: Any) -> HomogPoly:
    """Parse a polynomial required to be homogeneous of its stated degree."""
    p = poly_from_json(obj)
    top = len(p.parts) - 1
    for part in p.parts[:-1]:
        if not part.is_zero():
            raise InvalidInput("polynomial: expected homogeneous of degree %d"
                               " but grade %d is present" % (top, part.degree))
    return p.parts[top]


# ---------------------------------------------------------------------------
# quadratic forms: {"B": 3x3, "real": bool}; presets sphere / hyperboloid

QUADRIC_PRESETS = ("sphere", "hyperboloid")


def quadform_to_json(Q: QuadForm) -> Dict[str, Any]:
    return {"B": [[_cnum(Q.B[i, j]) for j in range(3)] for i in range(3)],
            "real": bool(Q.is_real)}


def quadform_from_json(obj: Any) -> QuadForm:
    _check_keys(obj, ("B", "real"), "quadric")
    if "B" not in obj:
        raise InvalidInput("quadric: needs 'B'")
    b = obj["B"]
    if not isinstance(b, list) or len(b) != 3 \
            or any(not isinstance(r, list) or len(r) != 3 for r in b):
        raise InvalidInput("quadric: B must be a 3x3 matrix")
    M = np.array([[_parse_cnum(b[i][j], "quadric B[%d][%d]" % (i, j))
                   for j in range(3)] for i in range(3)])
    if obj.get("real", False):
        if np.max(np.abs(M.imag)) != 0.0:
            raise InvalidInput("quadric: marked real but B has imaginary"
                               " entries")
        M = M.real
    return QuadForm(M)


def quadform_preset(name: str) -> QuadForm:
    if name == "sphere":
        return QuadForm(np.eye(3))
    if name == "hyperboloid":
        return QuadForm(np.diag([1.0, 1.0, -1.0]))
    raise InvalidInput("unknown quadric preset %r" % name)


# ---------------------------------------------------------------------------
# binary forms: {"degree": d, "coeffs": [[re,im] x (d+1)]}

def binary_to_json(f: BinaryForm) -> Dict[str, Any]:
    return {"degree": f.degree, "coeffs": [_cnum(c) for c in f.coeffs]}


def binary_from_json(obj: Any) -> BinaryForm:
    _check_keys(obj, ("degree", "coeffs"), "binary form")
    d = obj.get("degree")
    if not isinstance(d, int) or isinstance(d, bool) or d < 0:
        raise InvalidInput("binary form: degree must be a non-negative"
                           " integer")
    cs = obj.get("coeffs")
    if not isinstance(cs, list) or len(cs) != d + 1:
        raise InvalidInput("binary form: needs degree + 1 coefficients")
    return BinaryForm(d, [_parse_cnum(c, "binary coeff %d" % i)
                          for i, c in enumerate(cs)])


# ---------------------------------------------------------------------------
# root clusters: {"u": [[re,im],[re,im]], "mult": m}

def cluster_to_json(c: RootCluster) -> Dict[str, Any]:
    return {"u": [_cnum(v) for v in c.point.coords], "mult": int(c.multiplicity)}


def cluster_from_json(obj: Any) -> RootCluster:
    _check_keys(obj, ("u", "mult"), "root cluster")
    u = obj.get("u")
    if not isinstance(u, list) or len(u) != 2:
        raise InvalidInput("root cluster: u must have two coordinates")
    m = obj.get("mult")
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise InvalidInput("root cluster: mult must be a positive integer")
    return RootCluster(ProjPoint1([_parse_cnum(v, "root coordinate")
                                   for v in u]), m)


# ---------------------------------------------------------------------------
# factorizations, multipoles, sequences

def _lines_to_json(lines) -> List[List[List[float]]]:
    out = []
    for L in lines:
        w = L.coeffs if isinstance(L, HomogPoly) else np.asarray(L)
        out.append([_cnum(v) for v in w])
    return out


def _lines_from_json(v: Any, where: str) -> List[HomogPoly]:
    if not isinstance(v, list):
        raise InvalidInput("%s: lines must be a list" % where)
    lines = []
    for entry in v:
        if not isinstance(entry, list) or len(entry) != 3:
            raise InvalidInput("%s: each line needs three coefficients"
                               % where)
        lines.append(HomogPoly(1, [_parse_cnum(c, where) for c in entry]))
    return lines


def factorization_to_json(f: MultipoleFactorization) -> Dict[str, Any]:
    return {
        "lambda": _cnum(f.lam),
        "lines": _lines_to_json(f.lines),
        "remainder": poly_to_json(f.remainder),
        "parcelling": [list(piece) for piece in f.parcelling.pieces],
    }


def factorization_from_json(obj: Any) -> MultipoleFactorization:
    _check_keys(obj, ("lambda", "lines", "remainder", "parcelling"),
                "factorization")
    for key in ("lambda", "lines", "remainder", "parcelling"):
        if key not in obj:
            raise InvalidInput("factorization: missing %r" % key)
    pieces = obj["parcelling"]
    if not isinstance(pieces, list) or any(
            not isinstance(p, list) or len(p) != 2
            or any(not isinstance(i, int) or isinstance(i, bool) or i < 0
                   for i in p) for p in pieces):
        raise InvalidInput("factorization: parcelling must be a list of"
                           " index pairs")
    return MultipoleFactorization(
        _parse_cnum(obj["lambda"], "factorization lambda"),
        _lines_from_json(obj["lines"], "factorization"),
        homog_from_json(obj["remainder"]),
        GeneralizedParcelling(tuple(tuple(p) for p in pieces)),
    )


def multipole_to_json(m: Multipole) -> Dict[str, Any]:
    return {"scale": _cnum(m.scale), "lines": _lines_to_json(m.lines)}


def multipole_from_json(obj: Any) -> Multipole:
    _check_keys(obj, ("scale", "lines"), "multipole")
    if "scale" not in obj or "lines" not in obj:
        raise InvalidInput("multipole: needs 'scale' and 'lines'")
    lines = _lines_from_json(obj["lines"], "multipole")
    return Multipole(_parse_cnum(obj["scale"], "multipole scale"),
                     tuple(tuple(complex(v) for v in L.coeffs)
                           for L in lines))


def sequence_to_json(s: MultipoleSequence) -> Dict[str, Any]:
    return {"lambda": _cnum(s.lam),
            "terms": {str(k): multipole_to_json(s.terms[k])
                      for k in sorted(s.terms)}}


def sequence_from_json(obj: Any) -> MultipoleSequence:
    _check_keys(obj, ("lambda", "terms"), "sequence")
    if "lambda" not in obj:
        raise InvalidInput("sequence: needs 'lambda'")
    terms_obj = obj.get("terms", {})
    if not isinstance(terms_obj, dict):
        raise InvalidInput("sequence: terms must be an object")
    terms = {}
    for key, val in terms_obj.items():
        try:
            k = int(key)
        except ValueError:
            raise InvalidInput("sequence: term key %r is not an integer"
                               % key) from None
        if k < 1:
            raise InvalidInput("sequence: term degrees start at 1")
        terms[k] = multipole_from_json(val)
    return MultipoleSequence(_parse_cnum(obj["lambda"], "sequence lambda"),
                             terms)


# ---------------------------------------------------------------------------
# planar divisors

def pencil_divisor_to_json(d: PencilDivisor) -> List[Dict[str, Any]]:
    return [{"u": [_cnum(v) for v in pt.coords], "mult": int(m)}
            for pt, m in d.points]


def pencil_divisor_from_json(v: Any) -> PencilDivisor:
    if not isinstance(v, list) or not v:
        raise InvalidInput("pencil divisor: expected a non-empty list")
    entries: List[Tuple[ProjPoint1, int]] = []
    for obj in v:
        c = cluster_from_json(obj)
        entries.append((c.point, c.multiplicity))
    return PencilDivisor(entries)


def conic_divisor_to_json(d: ConicDivisor) -> List[Dict[str, Any]]:
    return [{"point": [_cnum(v) for v in pt.coords], "mult": int(m)}
            for pt, m in d.points]


def conic_divisor_from_json(v: Any) -> ConicDivisor:
    if not isinstance(v, list) or not v:
        raise InvalidInput("conic divisor: expected a non-empty list")
    entries: List[Tuple[ProjPoint2, int]] = []
    for obj in v:
        _check_keys(obj, ("point", "mult"), "conic divisor entry")
        pt = obj.get("point")
        if not isinstance(pt, list) or len(pt) != 3:
            raise InvalidInput("conic divisor entry: point must have three"
                               " coordinates")
        m = obj.get("mult")
        if not isinstance(m, int) or isinstance(m, bool) or m < 1:
            raise InvalidInput("conic divisor entry: mult must be a positive"
                               " integer")
        entries.append((ProjPoint2([_parse_cnum(x, "divisor point")
                                    for x in pt]), m))
    return ConicDivisor(entries)

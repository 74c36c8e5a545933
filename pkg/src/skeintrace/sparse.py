"""Dict-backed sparse vectors and operators.

Vectors are ``{key: scalar}`` with falsy coefficients dropped; keys are ints
or tuples of ints (tensor multi-indices).  Operators are ``{in_key: [(out_key,
scalar), ...]}`` column maps.  Everything is field-agnostic: scalars only need
+, -, *, bool.
"""

from __future__ import annotations


def vclean(v):
    return {k: c for k, c in v.items() if c}


def vadd(*vs):
    out = {}
    for v in vs:
        for k, c in v.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def vaxpy(out, coeff, v):
    """out += coeff * v, in place."""
    if not coeff:
        return out
    for k, c in v.items():
        s = out.get(k, 0) + coeff * c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vsub(a, b):
    out = dict(a)
    return vaxpy(out, -1, b)


def vscale(c, v):
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}

def vneg(v):
    return {k: -x for k, x in v.items()}


def veq(a, b):
    return vclean(a) == vclean(b)


def vtensor(a, b):
    """Tensor of vectors with tuple keys (ints are wrapped)."""
    out = {}
    for ka, ca in a.items():
        ta = ka if isinstance(ka, tuple) else (ka,)
        for kb, cb in b.items():
            tb = kb if isinstance(kb, tuple) else (kb,)
            out[ta + tb] = ca * cb
    return out


def op_apply(op, v):
    """Apply a column-map operator to a sparse vector."""
    out = {}
    for k, c in v.items():
        for k2, c2 in op.get(k, ()):
            s = out.get(k2, 0) + c * c2
            if s:
                out[k2] = s
            else:
                out.pop(k2, None)
    return out


def op_compose(op2, op1):
    """op2 after op1, both column maps."""
    out = {}
    for k, cols in op1.items():
        acc = {}
        for k1, c1 in cols:
            for k2, c2 in op2.get(k1, ()):
                s = acc.get(k2, 0) + c1 * c2
                if s:
                    acc[k2] = s
                else:
                    acc.pop(k2, None)
        if acc:
            out[k] = list(acc.items())
    return out


def op_transpose(op):
    out = {}
    for k, cols in op.items():
        for k2, c in cols:
            out.setdefault(k2, []).append((k, c))
    return out


def op_eq(a, b):
    ka = {k: vclean(dict(cols)) for k, cols in a.items()}
    kb = {k: vclean(dict(cols)) for k, cols in b.items()}
    ka = {k: v for k, v in ka.items() if v}
    kb = {k: v for k, v in kb.items() if v}
    return ka == kb


def vec_to_dense(v, n, zero=0):
    out = [zero] * n
    for k, c in v.items():
        out[k] = c
    return out


def dense_to_vec(xs):
    return {i: c for i, c in enumerate(xs) if c}

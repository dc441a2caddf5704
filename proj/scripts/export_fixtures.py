#!/usr/bin/env python3
"""Regenerate the committed test fixtures with PARI/GP (via the `cypari` wheel).

Writes field files, form files and a valuation spot-check table into
tests/fixtures/. The C++ test suite only reads the committed output.

    pip install cypari
    python3 scripts/export_fixtures.py [--out tests/fixtures]
"""
import argparse
import json
import os
import random

from cypari import pari

pari.allocatemem(4 * 10**9)
X = pari('x')
Y = pari('y')

QUARTIC = 'x^4-29258*x^2+97377280'
PRINTED_OCTIC = ('x^8-438896*x^6+60873718294*x^4-2968020622607040*x^2'
                 '+40426030666768772025')


def rat(c):
    return str(pari(c))


def poly_coeffs(P, n):
    """Ascending coefficient strings of a polynomial in x, padded to n."""
    P = pari(P)
    return [rat(pari.polcoef(P, i, X)) for i in range(n)]


def write_json(path, obj):
    with open(path, 'w') as fh:
        json.dump(obj, fh, indent=1)
        fh.write('\n')


class Field:
    """A field file description plus the PARI nf used to express elements."""

    def __init__(self, name, poly, integral_basis, galois_degree=None):
        self.name = name
        self.poly = pari(poly)
        self.n = int(pari.poldegree(self.poly))
        self.nf = pari.nfinit(self.poly)
        self.integral_basis = integral_basis
        self.galois_degree = galois_degree

    def coords(self, elt):
        """Coordinates of a polynomial-in-x element in the file's basis."""
        elt = pari.lift(pari.Mod(pari(elt), self.poly))
        if self.integral_basis:
            v = pari.nfalgtobasis(self.nf, elt)
            return [rat(v[i]) for i in range(self.n)]
        return poly_coeffs(elt, self.n)

    def to_json(self):
        out = {'schema': 'mfcong-field/1', 'name': self.name,
               'polynomial': poly_coeffs(self.poly, self.n + 1)}
        if self.integral_basis:
            zk = pari('(nf)->nf.zk')(self.nf)
            out['integral_basis'] = [poly_coeffs(zk[i], self.n) for i in range(self.n)]
        if self.galois_degree is not None:
            out['galois_closure_degree'] = self.galois_degree
        return out


def newform(level, weight, index, expected_degree):
    mf = pari(f'mfinit([{level},{weight}],0)')
    forms = pari.mfeigenbasis(mf)
    F = forms[index]
    fields = pari.mffields(mf)
    if int(pari.poldegree(fields[index])) != expected_degree:
        raise SystemExit(f'unexpected newform orbit ordering for {level}.{weight}')
    return F, fields[index]


def export_form(path, label, level, weight, F, field, field_ref, B, transfer):
    coeffs = pari.mfcoefs(F, B)
    out = []
    for n in range(B + 1):
        c = coeffs[n]
        if field is None:
            out.append([rat(c)])
        else:
            out.append(field.coords(transfer(c)))
    if out[1] != (['1'] if field is None else field.coords(1)):
        raise SystemExit(f'{label}: not normalized')
    write_json(path, {'schema': 'mfcong-form/1', 'label': label, 'level': level,
                      'weight': weight, 'character': 'trivial', 'field': field_ref,
                      'precision': B, 'coefficients': out})
    return coeffs


def transfer_map(raw_poly, target_poly):
    """Map polmods modulo raw_poly (variable y) to polynomials in x modulo target_poly."""
    iso = pari.nfisisom(raw_poly.substpol(Y, X), target_poly)
    if not iso:
        raise SystemExit('coefficient field is not isomorphic to the target field')
    image = iso[0]

    def go(c):
        if str(pari.type(c)) != 't_POLMOD':
            return c
        lifted = pari.lift(c)
        return pari.lift(pari.Mod(pari.subst(lifted, Y, image), target_poly))
    return go


def spotchecks(field, samples):
    rows = []
    for P in pari.idealprimedec(field.nf, 5):
        vals = []
        for s in samples:
            v = pari.idealval(field.nf, s, P) if s != 0 else None
            vals.append(None if v is None else int(v))
        rows.append({'e': int(P[2]), 'f': int(P[3]), 'valuations': vals})
    return {'field': field.name, 'p': 5,
            'elements': [field.coords(s) for s in samples], 'places': rows}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument('--out', default=os.path.join(os.path.dirname(__file__), '..', 'tests', 'fixtures'))
    ap.add_argument('--b1', type=int, default=4300)
    ap.add_argument('--b2', type=int, default=2700)
    ap.add_argument('--b3', type=int, default=4300)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    F1, _ = newform(9, 4, 0, 1)
    F2, raw2 = newform(9, 24, 3, 4)
    F3, raw3 = newform(9, 44, 3, 8)

    quartic = Field('quartic', QUARTIC, integral_basis=False, galois_degree=8)
    octic_poly = pari.polredabs(raw3.substpol(Y, X))
    octic = Field('octic', octic_poly, integral_basis=True, galois_degree=384)
    printed = Field('printed_octic', PRINTED_OCTIC, integral_basis=True)

    for f in (quartic, octic, printed):
        write_json(os.path.join(args.out, f'field_{f.name}.json'), f.to_json())

    c1 = export_form(os.path.join(args.out, 'f1_9_4.json'), '9.4.a.a', 9, 4, F1, None,
                     'rational', args.b1, lambda c: c)
    c2 = export_form(os.path.join(args.out, 'f2_9_24.json'), '9.24.a.d', 9, 24, F2, quartic,
                     'field_quartic.json', args.b2, transfer_map(raw2, quartic.poly))
    c3 = export_form(os.path.join(args.out, 'f3_9_44.json'), '9.44.a.d', 9, 44, F3, octic,
                     'field_octic.json', args.b3, transfer_map(raw3, octic.poly))

    rng = random.Random(20240501)
    tables = []
    for field, raw, coeffs, bound in ((quartic, raw2, c2, args.b2), (octic, raw3, c3, args.b3)):
        go = transfer_map(raw, field.poly)
        samples = [X, X + 1, pari(5), pari(25) * X]
        for P in pari.idealprimedec(field.nf, 5):
            samples.append(pari.nfbasistoalg(field.nf, P[1]).lift())
        for ell in (7, 11, 13, 101, 1009):
            samples.append(go(coeffs[ell]) - int(c1[ell]))
        for _ in range(12):
            v = [rng.randint(-40, 40) for _ in range(field.n)]
            samples.append(pari.nfbasistoalg(field.nf, pari(v).Col()).lift())
        samples = [pari.lift(pari.Mod(s, field.poly)) for s in samples]
        tables.append(spotchecks(field, samples))
    write_json(os.path.join(args.out, 'valuation_spotchecks.json'),
               {'schema': 'mfcong-spotcheck/1', 'tables': tables})


if __name__ == '__main__':
    main()

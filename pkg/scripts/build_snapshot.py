#!/usr/bin/env python3
"""Curate the bundled number-field snapshot (src/fakeclass/data/fields.jsonl).

This is an offline maintenance tool.  It needs cypari2, which is *not* a
runtime dependency of the package:

    pip install --only-binary :all: cypari2
    python3 scripts/build_snapshot.py [--out PATH]

Coverage (everything the classification pipeline looks up):

* Q itself;
* quadratic fields with |D| <= 200, both signatures;
* totally real cubics with D <= 250;
* totally real quartics with D <= 1400 and totally complex quartics with D <= 2000;
* the minimal totally real quintic and sextic;
* totally complex sextics: the groups nflist enumerates, the six small-regulator
  exceptions, and *every* totally complex quadratic extension of a totally real
  cubic with |D| <= 52441 (found with ray class fields, so this part is complete);
* totally complex octics: every totally complex quadratic extension of the real
  quartics with D = 725, 1125 up to 6.05^8, plus the minimal complex octic.

Class groups are certified with bnfcertify.  Characters of abelian fields are
computed from an explicit embedding into a cyclotomic field and checked against
the conductor-discriminant formula.
"""
from __future__ import annotations

import argparse
import json
import math
from fractions import Fraction
from pathlib import Path

import cypari2

pari = cypari2.Pari()
pari.allocatemem(2 * 10**9, silent=True)

# All totally complex quadratic extensions of bnf whose relative discriminant has
# norm <= B.  For a quadratic extension the relative discriminant is the finite
# part of the conductor, and totally complex means every real place ramifies.
pari(
    "qext(bnf,B)=my(res=List(),L=ideallist(bnf,B),r1=bnf.r1,inf=vector(r1,i,1));"
    "for(N=1,B,foreach(L[N],m,my(bnr=bnrinit(bnf,[m,inf]));"
    "foreach(subgrouplist(bnr,[2]),H,my(c=bnrconductor(bnr,H));"
    "if(c[1]==m&&c[2]==inf,listput(res,polredabs(bnrclassfield(bnr,H,2)))))));Vec(res)"
)
QEXT = pari("qext")

EXCEPTIONAL_SEXTICS = [
    "x^6 - x^5 + x^4 - 2*x^3 + 4*x^2 - 3*x + 1",  # -9747
    "x^6 - x^5 + 2*x^4 - 2*x^3 + 2*x^2 - 2*x + 1",  # -10051
    "x^6 - x^5 - x^4 + 2*x^3 - x + 1",  # -10571
    "x^6 - x^4 - 2*x^3 + 2*x + 1",  # -10816
    "x^6 - x^5 - x^2 + x + 1",  # -11691
    "x^6 - x^5 + 2*x^4 - 3*x^3 + 2*x^2 - x + 1",  # -12167
]
EXTRA = [
    "x^5 - x^4 - 4*x^3 + 3*x^2 + 3*x - 1",  # 14641, real quintic minimum
    "x^6 - x^5 - 7*x^4 + 2*x^3 + 7*x^2 - 2*x - 1",  # 300125, real sextic minimum
    "x^8 - 2*x^7 + 4*x^5 - 4*x^4 + 3*x^2 - 2*x + 1",  # 1257728, complex octic minimum
]


def nflist(group, lo, hi, s):
    return [pari.polredabs(p) for p in pari(f"nflist({group},[{lo},{hi}],{s})")]


def collect():
    polys = [pari("x")]
    for s in (0, 1):
        polys += nflist('"C2"', 1, 200, s)
    for g in ('"C3"', '"S3"'):
        polys += nflist(g, 1, 250, 0)
    for g in ('"C4"', '"V4"', '"D4"', '"A4"', '"S4"'):
        polys += nflist(g, 1, 1400, 0)
        polys += nflist(g, 1, 2000, 2)
    for k in range(1, 14):
        polys += nflist(f"[6,{k}]", 1, 52441, 3)
    polys += [pari.polredabs(pari(p)) for p in EXCEPTIONAL_SEXTICS + EXTRA]

    cubics = [p for p in polys if pari.poldegree(p) == 3 and pari.polsturm(p) == 3]
    for k in cubics:
        dk = int(pari.nfdisc(k))
        bound = 52441 // (dk * dk)
        if bound >= 1:
            polys += list(QEXT(pari.bnfinit(pari.subst(k, "x", "y"), 1), bound))
    for dk in (725, 1125):
        k = [p for p in polys if pari.poldegree(p) == 4 and int(pari.nfdisc(p)) == dk][0]
        bound = int(6.05**8) // (dk * dk)
        polys += list(QEXT(pari.bnfinit(pari.subst(k, "x", "y"), 1), bound))

    seen, out = set(), []
    for p in polys:
        key = str(p)
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def is_abelian(p):
    if pari.poldegree(p) == 1:
        return True
    try:
        gal = pari.galoisinit(p)
    except cypari2.PariError:
        return False
    if gal.type() == "t_INT":  # not Galois
        return False
    return bool(pari.galoisisabelian(gal))


def embedding_conductor(p, absdisc):
    """Smallest f (not 2 mod 4) with Q[x]/p inside Q(zeta_f); returns (f, image)."""
    primes = [int(q) for q in pari.factor(absdisc)[0]] if absdisc > 1 else []
    for f in range(1, absdisc + 1):
        if f % 4 == 2:
            continue
        if any(f % q == 0 for q in [int(q) for q in pari.factor(f)[0]] if q not in primes):
            continue
        if f == 1:
            if pari.poldegree(p) == 1:
                return 1, None
            continue
        emb = pari.nfisincl(p, pari.polcyclo(f))
        if emb != 0:
            return f, emb[0]
    raise RuntimeError(f"no cyclotomic embedding found for {p}")


def characters(p, absdisc):
    d = int(pari.poldegree(p))
    f, g = embedding_conductor(p, absdisc)
    if f == 1:
        return 1, [{"modulus": 1, "order": 1, "generator_values": []}]
    cyc = pari.polcyclo(f)
    # H = Gal(Q(zeta_f)/K): the automorphisms zeta -> zeta^a fixing the image of a root
    H = [a for a in range(1, f) if math.gcd(a, f) == 1
         and pari.Mod(pari.subst(pari.lift(g), "x", pari(f"x^{a}")), cyc) == g]
    G = pari.znstar(f, 1)
    gcyc = [int(c) for c in pari("(G)->G.cyc")(G)]
    logs = [[int(v) for v in pari.znlog(a, G)] for a in H]
    chars = []
    for idx in range(int(pari("(G)->G.no")(G))):
        # decode idx into exponent vector
        c, r = [], idx
        for m in gcyc:
            c.append(r % m)
            r //= m
        if all(sum(Fraction(ci * li, mi) for ci, mi, li in zip(c, gcyc, l)).denominator == 1
               for l in logs):
            chars.append(c)
    assert len(chars) == d, (p, f, len(chars))
    out = []
    for c in chars:
        G0, chi0 = pari.znchartoprimitive(G, c)
        f0 = int(pari("(G)->G.mod")(G0))
        cyc0 = [int(m) for m in pari("(G)->G.cyc")(G0)]
        gens0 = [int(pari.lift(x)) for x in pari("(G)->G.gen")(G0)]
        chi0 = [int(v) for v in chi0]
        order = 1
        for v, m in zip(chi0, cyc0):
            order = math.lcm(order, m // math.gcd(v, m))
        gv = [[gg, (v * order // m) % order] for gg, v, m in zip(gens0, chi0, cyc0)]
        out.append({"modulus": f0, "order": order, "generator_values": gv})
    assert math.prod(ch["modulus"] for ch in out) == absdisc, (p, out)
    assert math.lcm(*[ch["modulus"] for ch in out]) == f
    out.sort(key=lambda ch: (ch["modulus"], ch["order"], ch["generator_values"]))
    return f, out


def relative_generators(p, by_key):
    """For a quartic with a real quadratic subfield k of class number 1, write
    l = k(sqrt(alpha)) with alpha integral and free of principal square factors.
    alpha is given in the power basis of k's stored polynomial (in y)."""
    out = []
    for s in pari.nfsubfields(p, 2):
        kpol = pari.polredabs(s[0])
        if str(kpol) not in by_key or int(pari.polsturm(kpol)) != 2:
            continue
        K = pari.bnfinit(pari.subst(kpol, "x", "y"), 1)
        if int(pari("(b)->b.no")(K)) != 1:
            continue
        quad = pari.nffactor(K, p)[0][0]
        c = pari.Vec(quad)
        alpha = pari.nfalgtobasis(K, pari.lift(c[1] ** 2 - 4 * c[2]))
        fa = pari.idealfactor(K, alpha)
        sq = pari.idealhnf(K, 1)
        for pr, e in zip(fa[0], fa[1]):
            if int(e) >= 2:
                sq = pari.idealmul(K, sq, pari.idealpow(K, pr, int(e) // 2))
        t = pari.bnfisprincipal(K, sq)[1]
        alpha = pari.nfeltdiv(K, alpha, pari.nfeltmul(K, t, t))
        coeffs = [int(v) for v in pari.Vecrev(pari.lift(pari.nfbasistoalg(K, alpha)), 2)]
        out.append({"_base": str(kpol), "alpha": coeffs})
    return out


def record(p):
    d = int(pari.poldegree(p))
    disc = int(pari.nfdisc(p)) if d > 1 else 1
    r1 = int(pari.polsturm(p))
    r2 = (d - r1) // 2
    if d == 1:
        cl = []
    else:
        bnf = pari.bnfinit(p, 1)
        assert int(pari.bnfcertify(bnf)) == 1
        cl = [int(c) for c in pari("(b)->b.cyc")(bnf)]
    ab = is_abelian(p)
    cond, chars = (None, None)
    if ab:
        cond, chars = characters(p, abs(disc))
    coeffs = [int(c) for c in pari.Vecrev(p)]
    subs = [] if d == 1 else [str(pari.polredabs(s[0])) for s in pari.nfsubfields(p)
                              if 1 < int(pari.poldegree(s[0])) < d]
    return {"d": d, "r1": r1, "r2": r2, "disc": disc, "class_group": cl, "poly": coeffs,
            "abelian": ab, "conductor": cond, "characters": chars,
            "_key": str(p), "_subs": sorted(set(subs)) + ([str(pari("x"))] if d > 1 else [])}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1]
                                         / "src/fakeclass/data/fields.jsonl"))
    args = ap.parse_args()
    polys = collect()
    recs = [record(p) for p in polys]
    keys = {r["_key"] for r in recs}
    for r, p in zip(recs, polys):
        r["_rel"] = relative_generators(p, keys) if r["d"] == 4 and r["r1"] == 0 else []
    recs.sort(key=lambda r: (r["d"], r["r1"], abs(r["disc"]), r["poly"][::-1]))
    counter, labels = {}, {}
    for r in recs:
        key = (r["d"], r["r1"], abs(r["disc"]))
        counter[key] = counter.get(key, 0) + 1
        r["label"] = "{}.{}.{}.{}".format(*key, counter[key])
        labels[r["_key"]] = r["label"]
    with open(args.out, "w") as fh:
        for r in recs:
            obj = {"label": r["label"], "degree": r["d"], "r1": r["r1"], "r2": r["r2"],
                   "disc": r["disc"], "class_group": r["class_group"], "poly": r["poly"],
                   "abelian": r["abelian"], "conductor": r["conductor"],
                   "characters": r["characters"],
                   "subfields": sorted({labels[s] for s in r["_subs"] if s in labels})}
            if r["_rel"]:
                obj["relative"] = [{"base": labels[x["_base"]], "alpha": x["alpha"]}
                                   for x in r["_rel"]]
            fh.write(json.dumps(obj, separators=(",", ":")) + "\n")
    print(f"wrote {len(recs)} records to {args.out}")


if __name__ == "__main__":
    main()

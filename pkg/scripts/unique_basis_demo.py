#!/usr/bin/env python3
"""Walk through the distinguished three-dimensional subspace end to end.

Builds the hard-coded orthonormal basis of C^3 (x) C^9 whose span admits
exactly one locally distinguishable basis, checks the frame identity behind
it, derives the discrimination protocol, simulates it both exactly and with
sampled shots, and reports the entanglement picture (all basis vectors carry
~1.53 ebits and nothing in the span drops below ~1.52).
"""

import argparse
import sys

import numpy as np

from ddlocc.applications import entanglement_entropy, span_min_entanglement
from ddlocc.linalg import gram_operator, marginals
from ddlocc.protocol import build_protocol, simulate, subspace_from_vectors
from ddlocc.reference import DD_ANCHOR, UNIQUE_BASIS_FRAME, unique_basis_vectors
from ddlocc.solver import DDCertificate, orbit_equivalent


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--shots", type=int, default=10_000)
    ap.add_argument("--span-samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    vecs = unique_basis_vectors()
    gram = gram_operator(vecs)
    identity_dev = np.max(np.abs(
        gram.matrix - DD_ANCHOR / 9 - np.eye(9) / 3))
    _, m_b = marginals(gram)
    print("== the subspace ==")
    print(f"frame columns:              {UNIQUE_BASIS_FRAME.shape[1]} vectors of C^9")
    print(f"Gram = anchor/9 + I/3 dev:  {identity_dev:.2e}")
    print(f"B-marginal vs identity:     {np.max(np.abs(m_b - np.eye(3))):.2e}")

    S = subspace_from_vectors(vecs)
    p = build_protocol(S)
    print("\n== the protocol ==")
    print(f"solver residual:            {p.residual:.2e} (converged: {p.converged})")
    # the Gram operator is already in dd form, so its certificate orbit is the
    # monomial pairs: the one distinguishable basis is the input basis itself
    identity = DDCertificate(U=np.eye(3, dtype=complex), V=np.eye(3, dtype=complex),
                             residual=0.0, startsUsed=0)
    print(f"certificate is monomial:    {orbit_equivalent(identity, p.certificate)}")
    overlaps = np.abs(np.array(p.codewords) @ np.array(vecs).conj().T)
    print(f"codewords = input basis up to phases/relabeling: "
          f"{np.max(np.abs(np.sort(overlaps.ravel())[-3:] - 1.0)) <= 1e-9}")
    for c in range(3):
        weights = [np.linalg.norm(p.bobConditional[j]["vectors"][c]) ** 2
                   for j in range(3)]
        exact = simulate(p, c)
        sampled = simulate(p, c, shots=args.shots, seed=args.seed)
        print(f"codeword {c}: outcome weights ({weights[0]:.3f}, {weights[1]:.3f}, "
              f"{weights[2]:.3f})  exact {exact:.12f}  "
              f"{args.shots}-shot {sampled:.4f}")

    print("\n== the entanglement ==")
    for c, v in enumerate(vecs):
        print(f"basis vector {c}: {entanglement_entropy(v):.9f} ebits")
    span_min, coeff = span_min_entanglement(
        np.array(vecs), budget=args.span_samples, seed=args.seed)
    print(f"span minimum over {args.span_samples} samples + refinement: "
          f"{span_min:.9f} ebits")
    print(f"witness coefficients: {np.round(coeff, 4)}")
    print("\nevery state of the span stays far from product form, yet the")
    print("basis is distinguishable with one round of one-way communication")
    return 0


if __name__ == "__main__":
    sys.exit(main())

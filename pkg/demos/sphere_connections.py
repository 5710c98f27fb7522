"""The three-piece noncommutative sphere: both construction methods side by side.

Run with ``python3 demos/sphere_connections.py``.
"""

from __future__ import annotations

from hopfglue.freestar import build_example, method_one, method_two, projector, verify_En, verify_symbolic


def show(label, ell) -> None:
    print(f"{label}:")
    for l, r in ell.terms:
        print(f"  {l}  (x)  {r}")
    rep = verify_symbolic(ell, build_example())
    print(f"  valid: {rep.passed}")
    p = projector(ell)
    print(f"  projector {p.size}x{p.size}, idempotent {p.idempotent}, degree-0 {p.coinvariant}")


def main() -> None:
    one = method_one()
    print("transfers:", {k: str(v) for k, v in one.transfers.items()})
    show("method I", one.ell)
    show("method II", method_two().ell)
    print("shift model check (cutoff 16):", verify_En(16).passed)


if __name__ == "__main__":
    main()

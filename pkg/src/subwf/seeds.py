"""Deterministic seed derivation for trial-parallel experiments.

All randomness in a batch run flows through ``derive_trial_seed`` so that
scheduling (serial or worker pool) never affects results.  The mixer is a
splitmix64 absorb chain: each input (integer or tag string) is folded into a
64-bit state and passed through the splitmix64 finalizer.  Within one build
this is a stable, documented function of its inputs; bit-compatibility with
other implementations is not promised.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    """One splitmix64 finalization round (Steele et al. mixing constants)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def _fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h = ((h ^ b) * 0x100000001B3) & _MASK64
    return h


def mix_seed(*parts: int | str) -> int:
    """Fold integers and tag strings into one 64-bit seed.

    Strings are hashed with FNV-1a (stable across processes, unlike the
    builtin ``hash``); every absorb step runs the state through splitmix64.
    """
    state = 0x8BADF00D5EEDC0DE
    for part in parts:
        if isinstance(part, str):
            value = _fnv1a64(part.encode("utf-8"))
        else:
            value = int(part) & _MASK64
        state = _splitmix64(state ^ value)
    return state


def derive_trial_seed(master_seed: int, trial_index: int, stream_tag: str) -> int:
    """Per-trial, per-stream seed: distinct tags give disjoint streams."""
    return mix_seed(master_seed, trial_index, stream_tag)

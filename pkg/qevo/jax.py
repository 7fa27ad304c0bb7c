"""JAX-related utilities."""
import zlib
from typing import Tuple

import jax
import jax.numpy as jnp
import numpy as np
from jax.tree_util import tree_leaves

# Fidelities are compared at 1e-12; single precision is not an option.
jax.config.update("jax_enable_x64", True)

__all__ = [
    "fold_in_str",
    "generator",
    "split_generators",
    "wait_until_computed",
]


def wait_until_computed(x):
    """Wait until all the elements of x have been computed.

    This is useful to display accurate computation times when timing the
    evaluation modes, since JAX dispatches computations asynchronously.
    """
    for leaf in tree_leaves(x):
        if hasattr(leaf, "block_until_ready"):
            leaf.block_until_ready()


def generator(rng_key: jnp.ndarray) -> np.random.Generator:
    """Build a NumPy generator from a JAX PRNG key.

    Keys are what we split and pass around: one per island, per generation
    and per generation phase. Genetic operators however make many small
    scalar draws for which dispatching to XLA is wasteful, so each phase key
    seeds a NumPy generator that the operators consume.

    """
    entropy = np.asarray(rng_key, dtype=np.uint32).ravel().tolist()
    return np.random.default_rng(entropy)


def split_generators(rng_key, num: int) -> Tuple[np.random.Generator, ...]:
    """Split a key into `num` independent generators."""
    keys = jax.random.split(rng_key, num)
    return tuple(generator(key) for key in keys)


def fold_in_str(rng_key, value: str):
    """Fold a string identifier (e.g. a target id) into a key."""
    return jax.random.fold_in(rng_key, zlib.crc32(value.encode("utf-8")) & 0x7FFFFFFF)

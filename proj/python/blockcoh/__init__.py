"""Block coherence of subspace packings: constructions, bounds and experiments."""

from ._core import (
    BlockFrame,
    ConvergenceError,
    Error,
    ParseError,
    ValidationError,
    __version__,
    alltop_gabor,
    analyze,
    chordal_distance,
    discrete_chirp,
    empirical_mu_curve,
    exponent_psi,
    flip,
    from_bfm,
    gram_map,
    harmonic_qr_etf,
    id_hadamard_union,
    kerdock_real,
    kron_construct1,
    kron_construct2,
    lemma2_bound,
    mu,
    nu,
    nu1,
    orthobases_lower,
    sample_block_frame,
    solve_a_hat,
    spectral_distance,
    steiner_pairs_etf,
    tail_bound_G,
    thm14_min_c,
    to_bfm,
    verify_etf,
    verify_flat_union,
    welch_block_lower,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]

"""Layered belief-propagation decoding toward a target syndrome.

The layered decoder sweeps the scheduling layers once per iteration.
For every check in the current layer it forms the variable-to-check
messages from the running posteriors, applies the sign-product /
Phi-sum check update (sign flipped where the target syndrome bit is
odd), and folds the fresh check-to-variable messages straight back into
the posteriors, so later layers see them within the same iteration.

All quantities live in 64-bit floats and are clipped to +-llr_clip;
the Phi kernel clamps its argument away from 0 and infinity, so no
intermediate can become non-finite.

A flooding decoder over the expanded adjacency (all checks updated
simultaneously from the previous iteration) is included as a reference;
it shares the kernel constants but none of the quasi-cyclic indexing.

Concurrency contract: distinct codewords are independent (decode_batch
may split them across workers); within one layer, checks write disjoint
variables; layers are sequential within an iteration; a DecoderState
belongs to one worker at a time.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DecodeOutcome",
    "DecoderConfig",
    "DecoderState",
    "FloodingDecoder",
    "LayeredDecoder",
    "decode",
    "decode_batch",
    "flooding_decode",
    "phi",
    "syndrome_of",
]

DEFAULT_LLR_CLIP = 30.0
DEFAULT_PHI_EPSILON = 1e-10


@dataclass(frozen=True)
class DecoderConfig:
    """Iteration budget, termination policy, and numeric guards."""

    max_iterations: int = 50
    early_termination: bool = True
    llr_clip: float = DEFAULT_LLR_CLIP
    phi_epsilon: float = DEFAULT_PHI_EPSILON

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.llr_clip > 0:
            raise ValueError("llr_clip must be positive")
        if not 0 < self.phi_epsilon < 1:
            raise ValueError("phi_epsilon must be in (0, 1)")


@dataclass
class DecodeOutcome:
    """Hard decision, whether it satisfies the target syndrome, and cost."""

    word: np.ndarray
    converged: bool
    iterations_used: int


@dataclass
class DecoderState:
    """Mutable per-batch decoding buffers.

    `posterior` is (batch, n) and `edge_messages` is one flat (batch,
    total_edges * z) buffer holding the check-to-variable messages in
    compact-index order: slot by slot, each slot an (edge, z-offset)
    block. Initialized to zero so the first variable-to-check message
    equals the channel LLR.
    """

    posterior: np.ndarray
    edge_messages: np.ndarray
    iteration: int = 0
    layer: int = -1

    @property
    def batch_size(self):
        return self.posterior.shape[0]


def phi(x, phi_epsilon=DEFAULT_PHI_EPSILON, llr_clip=DEFAULT_LLR_CLIP):
    """The self-inverse check-node kernel -ln(tanh(x/2)).

    Evaluated as log1p(2/expm1(x)), which is the same function but keeps
    full relative precision at both ends of the domain. The argument is
    clamped to [phi_epsilon, llr_clip] first, so the result is always
    finite and positive.
    """
    x = np.clip(x, phi_epsilon, llr_clip)
    return np.log1p(2.0 / np.expm1(x))


class LayeredDecoder:
    """Compiled layered decoder for one (compact index, schedule) pair.

    Precomputes, per rearranged row slot, the (degree, z) grid of
    expanded variable indices, and stacks the slots of each layer so a
    whole layer updates in one pass of vectorized operations over the
    batch.
    """

    def __init__(self, index, schedule, cfg):
        flat_rows = tuple(r for layer in schedule.layers for r in layer)
        if flat_rows != tuple(index.slot_rows):
            raise ValueError("schedule does not match the compact index row order")
        self.cfg = cfg
        self.index = index
        self.schedule = schedule
        self.z = index.z
        self.n_vars = index.n_cols * index.z
        self.n_checks = len(index.slot_rows) * index.z

        z = self.z
        offsets = np.arange(z)
        self._slot_idx = []
        self._slot_edge_span = []
        for s in range(len(index.slot_rows)):
            lo, hi = index.slot_offsets[s], index.slot_offsets[s + 1]
            cols = np.array([e.base_col for e in index.edges[lo:hi]], dtype=np.int64)
            shifts = np.array([e.shift for e in index.edges[lo:hi]], dtype=np.int64)
            idx = cols[:, None] * z + (offsets[None, :] + shifts[:, None]) % z
            self._slot_idx.append(idx)
            self._slot_edge_span.append((lo * z, hi * z))

        # layer l owns slots [starts[l], starts[l+1])
        sizes = [len(layer) for layer in schedule.layers]
        self._layer_starts = np.concatenate([[0], np.cumsum(sizes)])

        # layer safety: checks inside one layer must write disjoint columns
        slot = 0
        for layer in schedule.layers:
            seen = set()
            for _ in layer:
                lo, hi = index.slot_offsets[slot], index.slot_offsets[slot + 1]
                cols = {e.base_col for e in index.edges[lo:hi]}
                if seen & cols:
                    raise ValueError("rows within a layer share a base column")
                seen |= cols
                slot += 1

        # every slot of a layer is stacked into one edge-major block so a
        # merged layer costs one pass of vectorized ops, not one per row
        self._layers = []
        for layer_no in range(len(schedule.layers)):
            lo_slot = self._layer_starts[layer_no]
            hi_slot = self._layer_starts[layer_no + 1]
            slot_ids = range(lo_slot, hi_slot)
            idx = np.concatenate([self._slot_idx[s] for s in slot_ids])
            degrees = np.array(
                [self._slot_idx[s].shape[0] for s in slot_ids], dtype=np.int64
            )
            seg_starts = np.concatenate([[0], np.cumsum(degrees)[:-1]])
            syn_idx = np.stack(
                [index.slot_rows[s] * z + offsets for s in slot_ids]
            )
            self._layers.append(
                dict(
                    idx=idx,
                    span=(self._slot_edge_span[lo_slot][0], self._slot_edge_span[hi_slot - 1][1]),
                    seg_starts=seg_starts,
                    degrees=degrees,
                    syn_idx=syn_idx,
                    # uniform row degree allows the reshape/broadcast path
                    degree=int(degrees[0]) if (degrees == degrees[0]).all() else None,
                )
            )

        # whole-matrix stack for one-shot syndrome evaluation
        self._all_idx = np.concatenate(self._slot_idx)
        all_degrees = np.array([s.shape[0] for s in self._slot_idx], dtype=np.int64)
        self._all_seg_starts = np.concatenate([[0], np.cumsum(all_degrees)[:-1]])
        self._all_syn_idx = np.stack(
            [row * z + offsets for row in index.slot_rows]
        )

    def new_state(self, llr0):
        """Fresh state: posterior = clipped channel LLRs, messages = 0."""
        posterior = np.atleast_2d(np.asarray(llr0, dtype=np.float64)).copy()
        if posterior.shape[1] != self.n_vars:
            raise ValueError(
                f"llr vector length {posterior.shape[1]} != block length {self.n_vars}"
            )
        np.clip(posterior, -self.cfg.llr_clip, self.cfg.llr_clip, out=posterior)
        edge_messages = np.zeros(
            (posterior.shape[0], self.index.total_edges * self.z), dtype=np.float64
        )
        return DecoderState(posterior=posterior, edge_messages=edge_messages)

    def _check_syndrome(self, syndrome, batch):
        syndrome = np.atleast_2d(np.asarray(syndrome))
        if syndrome.shape != (batch, self.n_checks):
            raise ValueError(
                f"syndrome shape {syndrome.shape} != ({batch}, {self.n_checks})"
            )
        return syndrome.astype(bool)

    def _layer_update_core(self, state, struct, syndrome):
        cfg = self.cfg
        idx = struct["idx"]
        lo, hi = struct["span"]
        r_old = state.edge_messages[:, lo:hi].reshape(-1, idx.shape[0], self.z)

        # variable-to-check: posterior minus this check's previous message
        q = state.posterior[:, idx] - r_old
        np.clip(q, -cfg.llr_clip, cfg.llr_clip, out=q)

        # check update: product of signs, Phi-sum of magnitudes over the
        # other edges of the same check; syndrome parity folds in as one
        # more sign bit
        ph = phi(np.abs(q), cfg.phi_epsilon, cfg.llr_clip)
        neg = q < 0
        syn = syndrome[:, struct["syn_idx"]]
        degree = struct["degree"]
        if degree is not None:
            shape4 = (q.shape[0], -1, degree, self.z)
            ph4 = ph.reshape(shape4)
            neg4 = neg.reshape(shape4)
            others = ph4.sum(axis=2, keepdims=True) - ph4
            parity = np.logical_xor.reduce(neg4, axis=2, keepdims=True) ^ syn[:, :, None, :]
            mag = phi(others, cfg.phi_epsilon, cfg.llr_clip).reshape(ph.shape)
            out_neg = (neg4 ^ parity).reshape(neg.shape)
        else:
            seg_starts = struct["seg_starts"]
            degrees = struct["degrees"]
            totals = np.repeat(np.add.reduceat(ph, seg_starts, axis=1), degrees, axis=1)
            mag = phi(totals - ph, cfg.phi_epsilon, cfg.llr_clip)
            parity = np.bitwise_xor.reduceat(neg, seg_starts, axis=1) ^ syn
            out_neg = neg ^ np.repeat(parity, degrees, axis=1)
        r_new = np.where(out_neg, -mag, mag)
        np.clip(r_new, -cfg.llr_clip, cfg.llr_clip, out=r_new)

        state.edge_messages[:, lo:hi] = r_new.reshape(r_new.shape[0], -1)
        posterior = q + r_new
        np.clip(posterior, -cfg.llr_clip, cfg.llr_clip, out=posterior)
        state.posterior[:, idx] = posterior

    def layer_update(self, state, layer, syndrome):
        """Apply one layer's check updates to the state, in place."""
        syndrome = self._check_syndrome(syndrome, state.batch_size)
        self._layer_update_core(state, self._layers[layer], syndrome)
        state.layer = layer
        return state

    def _sweep(self, state, syndrome):
        for layer, struct in enumerate(self._layers):
            self._layer_update_core(state, struct, syndrome)
            state.layer = layer

    def hard_decision(self, state):
        """Bit 0 wherever the posterior is >= 0."""
        return (state.posterior < 0).astype(np.uint8)

    def syndrome_satisfied(self, words, syndrome):
        """Per-frame check that H @ word == syndrome over GF(2)."""
        syndrome = self._check_syndrome(syndrome, words.shape[0])
        bits = np.atleast_2d(words).astype(bool)
        parity = np.bitwise_xor.reduceat(bits[:, self._all_idx], self._all_seg_starts, axis=1)
        return (parity == syndrome[:, self._all_syn_idx]).all(axis=(1, 2))

    def decode_batch_arrays(self, llr0, syndrome):
        """Decode a (batch, n) LLR block toward (batch, m) syndromes.

        Frames that hit early termination are frozen at their stopping
        iteration, so results are bit-identical to decoding each frame
        alone.
        """
        cfg = self.cfg
        state = self.new_state(llr0)
        batch = state.batch_size
        syndrome = self._check_syndrome(syndrome, batch)

        words = np.zeros((batch, self.n_vars), dtype=np.uint8)
        converged = np.zeros(batch, dtype=bool)
        iterations = np.full(batch, cfg.max_iterations, dtype=np.int64)
        active = np.ones(batch, dtype=bool)

        for t in range(1, cfg.max_iterations + 1):
            self._sweep(state, syndrome)
            state.iteration = t
            if cfg.early_termination:
                hard = self.hard_decision(state)
                done = self.syndrome_satisfied(hard, syndrome)
                newly = active & done
                if newly.any():
                    words[newly] = hard[newly]
                    converged[newly] = True
                    iterations[newly] = t
                    active &= ~done
                if not active.any():
                    break

        if active.any():
            hard = self.hard_decision(state)
            done = self.syndrome_satisfied(hard, syndrome)
            words[active] = hard[active]
            converged[active] = done[active]
        return words, converged, iterations


class _DegreeGroups:
    """Expanded checks bucketed by degree, with flat scatter indices."""

    def __init__(self, rows, n_vars):
        self.n_vars = n_vars
        self.n_checks = len(rows)
        top = max((int(np.max(r)) for r in rows if len(r)), default=-1)
        if top >= n_vars:
            raise ValueError(
                f"vector length {n_vars} shorter than adjacency ({top + 1})"
            )
        degrees = np.array([len(r) for r in rows], dtype=np.int64)
        self.groups = []
        for d in np.unique(degrees):
            check_ids = np.flatnonzero(degrees == d)
            idx = np.stack([np.asarray(rows[c], dtype=np.int64) for c in check_ids])
            self.groups.append((check_ids, idx))

    def parity(self, bits):
        """(batch, n_checks) GF(2) products of the given (batch, n) bits."""
        bits = np.atleast_2d(bits).astype(bool)
        out = np.zeros((bits.shape[0], self.n_checks), dtype=bool)
        for check_ids, idx in self.groups:
            out[:, check_ids] = np.logical_xor.reduce(bits[:, idx], axis=2)
        return out


def syndrome_of(word, rows):
    """Syndrome of a word (or batch of words) under the expanded adjacency."""
    word = np.asarray(word)
    squeeze = word.ndim == 1
    bits = np.atleast_2d(word)
    parity = _DegreeGroups(rows, bits.shape[1]).parity(bits).astype(np.uint8)
    return parity[0] if squeeze else parity


class FloodingDecoder:
    """Reference flooding decoder over an expanded row adjacency.

    Every check updates simultaneously from the previous iteration's
    posteriors and messages; the posterior is then rebuilt from the
    channel LLRs plus all fresh check messages. Same kernel constants,
    clipping, syndrome signs, and hard-decision rule as the layered
    decoder, but none of its indexing.
    """

    def __init__(self, rows, n_vars, cfg):
        self.cfg = cfg
        self.n_vars = n_vars
        self.groups = _DegreeGroups(rows, n_vars)
        self.n_checks = self.groups.n_checks

    def _as_syndrome(self, syndrome, batch):
        syndrome = np.atleast_2d(np.asarray(syndrome))
        if syndrome.shape != (batch, self.n_checks):
            raise ValueError(
                f"syndrome shape {syndrome.shape} != ({batch}, {self.n_checks})"
            )
        return syndrome.astype(bool)

    def decode_batch_arrays(self, llr0, syndrome):
        cfg = self.cfg
        llr0 = np.atleast_2d(np.asarray(llr0, dtype=np.float64)).copy()
        if llr0.shape[1] != self.n_vars:
            raise ValueError(f"llr vector length {llr0.shape[1]} != {self.n_vars}")
        np.clip(llr0, -cfg.llr_clip, cfg.llr_clip, out=llr0)
        batch = llr0.shape[0]
        syndrome = self._as_syndrome(syndrome, batch)

        posterior = llr0.copy()
        messages = [
            np.zeros((batch, idx.shape[0], idx.shape[1])) for _, idx in self.groups.groups
        ]

        words = np.zeros((batch, self.n_vars), dtype=np.uint8)
        converged = np.zeros(batch, dtype=bool)
        iterations = np.full(batch, cfg.max_iterations, dtype=np.int64)
        active = np.ones(batch, dtype=bool)

        batch_offsets = np.arange(batch)[:, None, None] * self.n_vars
        for t in range(1, cfg.max_iterations + 1):
            accum = np.zeros(batch * self.n_vars)
            for g, (check_ids, idx) in enumerate(self.groups.groups):
                q = posterior[:, idx] - messages[g]
                np.clip(q, -cfg.llr_clip, cfg.llr_clip, out=q)
                ph = phi(np.abs(q), cfg.phi_epsilon, cfg.llr_clip)
                total = ph.sum(axis=2, keepdims=True)
                mag = phi(total - ph, cfg.phi_epsilon, cfg.llr_clip)
                neg = q < 0
                parity = np.logical_xor.reduce(neg, axis=2, keepdims=True)
                out_neg = neg ^ parity ^ syndrome[:, check_ids, None]
                r_new = np.where(out_neg, -mag, mag)
                np.clip(r_new, -cfg.llr_clip, cfg.llr_clip, out=r_new)
                messages[g] = r_new
                accum += np.bincount(
                    (batch_offsets + idx[None, :, :]).ravel(),
                    weights=r_new.ravel(),
                    minlength=batch * self.n_vars,
                )
            posterior = llr0 + accum.reshape(batch, self.n_vars)
            np.clip(posterior, -cfg.llr_clip, cfg.llr_clip, out=posterior)

            if cfg.early_termination:
                hard = (posterior < 0).astype(np.uint8)
                done = (self.groups.parity(hard) == syndrome).all(axis=1)
                newly = active & done
                if newly.any():
                    words[newly] = hard[newly]
                    converged[newly] = True
                    iterations[newly] = t
                    active &= ~done
                if not active.any():
                    break

        if active.any():
            hard = (posterior < 0).astype(np.uint8)
            done = (self.groups.parity(hard) == syndrome).all(axis=1)
            words[active] = hard[active]
            converged[active] = done[active]
        return words, converged, iterations


def _outcomes(words, converged, iterations):
    return [
        DecodeOutcome(word=words[i], converged=bool(converged[i]), iterations_used=int(iterations[i]))
        for i in range(words.shape[0])
    ]


def decode(llr0, syndrome, index, schedule, cfg):
    """Decode one frame; see LayeredDecoder for the batched form."""
    dec = LayeredDecoder(index, schedule, cfg)
    words, converged, iterations = dec.decode_batch_arrays(
        np.asarray(llr0)[None, :], np.asarray(syndrome)[None, :]
    )
    return _outcomes(words, converged, iterations)[0]


def decode_batch(words, index, schedule, cfg, workers=1):
    """Decode a list of (llr0, syndrome) frames, optionally across threads.

    Outcomes are bit-identical to decoding each frame alone, in the
    input order, regardless of worker count.
    """
    if not words:
        return []
    dec = LayeredDecoder(index, schedule, cfg)
    llr0 = np.stack([np.asarray(w[0], dtype=np.float64) for w in words])
    syndromes = np.stack([np.asarray(w[1]) for w in words])
    if workers <= 1 or len(words) == 1:
        results = [dec.decode_batch_arrays(llr0, syndromes)]
    else:
        chunks = np.array_split(np.arange(len(words)), min(workers, len(words)))
        chunks = [c for c in chunks if c.size]
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            results = list(
                pool.map(lambda c: dec.decode_batch_arrays(llr0[c], syndromes[c]), chunks)
            )
    outcomes = []
    for triple in results:
        outcomes.extend(_outcomes(*triple))
    return outcomes


def flooding_decode(llr0, syndrome, rows, cfg):
    """Flooding reference decode of one frame over the expanded adjacency."""
    llr0 = np.asarray(llr0, dtype=np.float64)
    dec = FloodingDecoder(rows, llr0.shape[-1], cfg)
    words, converged, iterations = dec.decode_batch_arrays(
        llr0[None, :], np.asarray(syndrome)[None, :]
    )
    return _outcomes(words, converged, iterations)[0]

"""Per-site two-bit saturating branch predictor.

Each conditional branch site gets its own counter with the classic four
states.  Taken moves the counter toward strongly-taken, not-taken toward
strongly-not-taken, one step per outcome:

    ST  taken -> ST     not taken -> WT
    WT  taken -> ST     not taken -> WNT
    WNT taken -> WT     not taken -> SNT
    SNT taken -> WNT    not taken -> SNT

A prediction hits when the state's direction matches the actual outcome.
Fresh sites start weakly-not-taken so a first-seen branch has no bias
toward either strong state.
"""

from enum import Enum


class PredictorState(Enum):
    ST = "strongly-taken"
    WT = "weakly-taken"
    WNT = "weakly-not-taken"
    SNT = "strongly-not-taken"

    @property
    def predicts_taken(self) -> bool:
        return self in (PredictorState.ST, PredictorState.WT)


_S = PredictorState
TRANSITIONS = {
    (_S.ST, True): _S.ST,
    (_S.ST, False): _S.WT,
    (_S.WT, True): _S.ST,
    (_S.WT, False): _S.WNT,
    (_S.WNT, True): _S.WT,
    (_S.WNT, False): _S.SNT,
    (_S.SNT, True): _S.WNT,
    (_S.SNT, False): _S.SNT,
}


class BranchPredictorTable:
    """Maps branch site ids to predictor states, allocating on first use."""

    def __init__(self, initial_state: PredictorState = PredictorState.WNT):
        self.initial_state = initial_state
        self._states = {}

    def state_of(self, site) -> PredictorState:
        return self._states.get(site, self.initial_state)

    def predict_and_update(self, site, taken: bool) -> bool:
        """Feed one outcome; returns True when the prediction was correct."""
        state = self._states.get(site, self.initial_state)
        hit = state.predicts_taken == bool(taken)
        self._states[site] = TRANSITIONS[(state, bool(taken))]
        return hit

    def reset(self) -> None:
        self._states.clear()

    def __len__(self):
        return len(self._states)


def count_bb_jump(transitions) -> int:
    """Count block transitions that actually change blocks.

    `transitions` is an iterable of (from_id, to_id) pairs from the dynamic
    block-entry sequence.  A block looping back to itself keeps locality and
    is not a jump; cyclic patterns like A,B,C,A,B,C are all jumps.
    """
    return sum(1 for frm, to in transitions if frm != to)

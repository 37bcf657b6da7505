from irtime import BranchPredictorTable, PredictorState, count_bb_jump
from irtime.branch import TRANSITIONS


def test_transition_table_is_exact():
    ST, WT, WNT, SNT = (PredictorState.ST, PredictorState.WT,
                        PredictorState.WNT, PredictorState.SNT)
    assert TRANSITIONS == {
        (ST, True): ST, (ST, False): WT,
        (WT, True): ST, (WT, False): WNT,
        (WNT, True): WT, (WNT, False): SNT,
        (SNT, True): WNT, (SNT, False): SNT,
    }


def test_prediction_direction():
    assert PredictorState.ST.predicts_taken
    assert PredictorState.WT.predicts_taken
    assert not PredictorState.WNT.predicts_taken
    assert not PredictorState.SNT.predicts_taken


def test_loop_nine_taken_one_not():
    # outcome sequence of a 10-iteration loop back edge, starting at WNT:
    # T is mispredicted once, then hits until the final NT misses.
    table = BranchPredictorTable()
    outcomes = [True] * 9 + [False]
    hits = sum(1 for o in outcomes if table.predict_and_update(0, o))
    assert hits == 8
    assert len(outcomes) - hits == 2


def test_saturation():
    table = BranchPredictorTable()
    for _ in range(50):
        table.predict_and_update(1, True)
    assert table.state_of(1) == PredictorState.ST
    for _ in range(50):
        table.predict_and_update(1, False)
    assert table.state_of(1) == PredictorState.SNT


def test_default_initial_state_is_wnt():
    table = BranchPredictorTable()
    assert table.state_of(123) == PredictorState.WNT
    # first taken outcome is therefore a miss
    assert table.predict_and_update(123, True) is False


def test_sites_are_independent():
    table = BranchPredictorTable()
    for _ in range(4):
        table.predict_and_update(0, True)
    assert table.state_of(0) == PredictorState.ST
    assert table.state_of(1) == PredictorState.WNT
    # training site 0 does not help site 1
    assert table.predict_and_update(1, True) is False


def test_alternating_pattern_from_wnt():
    table = BranchPredictorTable()
    hits = [table.predict_and_update(0, o)
            for o in (True, False, True, False)]
    # WNT->WT(miss), WT predicts T but sees NT (miss) ->WNT,
    # WNT predicts NT but sees T (miss) ->WT, WT predicts T sees NT (miss)
    assert hits == [False, False, False, False]


def test_configurable_initial_state():
    table = BranchPredictorTable(PredictorState.ST)
    assert table.predict_and_update(0, True) is True


def test_reset():
    table = BranchPredictorTable()
    table.predict_and_update(0, True)
    table.predict_and_update(0, True)
    table.reset()
    assert len(table) == 0
    assert table.state_of(0) == PredictorState.WNT


def test_bb_jump_counting():
    # self-transitions contribute nothing
    assert count_bb_jump([(3, 3)] * 5) == 0
    cycle = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]
    assert count_bb_jump(cycle) == 6
    mixed = [(0, 0), (0, 1), (1, 1), (1, 0)]
    assert count_bb_jump(mixed) == 2
    assert count_bb_jump([]) == 0

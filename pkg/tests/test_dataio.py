import numpy as np
import pandas as pd
import pytest

from src.dataio.canonical import read_dataset, read_id_maps, read_split, write_dataset, write_id_maps, write_split
from src.dataio.parsing import FORMATS, FormatSpec, parse_interactions
from src.dataio.split import leave_one_out_split
from src.dataio.stats import dataset_stats
from src.dataio.transforms import drop_sparse_users, kcore_filter, remap_ids, subsample_users, to_implicit
from src.dataio.types import InteractionLog
from src.primitives.exceptions import ContractViolation, DatasetError, SplitError


def write(tmp_path, text, name="raw.txt"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


# --- parsing ---------------------------------------------------------------

def test_parse_movielens_lines(tmp_path):
    path = write(tmp_path, "1::1193::5::978300760\n1::661::3::978302109\n2::1193::4::978298413\n")
    log = parse_interactions(path, FORMATS["movielens"])
    assert len(log) == 3
    assert log.has_timestamps
    assert log.n_users == 2 and log.n_items == 2
    assert log.frame["timestamp"].tolist() == [978300760, 978302109, 978298413]


def test_malformed_line_reports_line_number(tmp_path):
    path = write(tmp_path, "1,10,5,100\nbroken\n")
    with pytest.raises(DatasetError, match=r":2:"):
        parse_interactions(path, FORMATS["csv"])


def test_non_numeric_rating_is_rejected(tmp_path):
    path = write(tmp_path, "1,10,five,100\n")
    with pytest.raises(DatasetError, match="rating"):
        parse_interactions(path)


def test_missing_file_is_a_dataset_error(tmp_path):
    with pytest.raises(DatasetError):
        parse_interactions(tmp_path / "absent.csv")


def test_empty_file_is_rejected(tmp_path):
    with pytest.raises(DatasetError):
        parse_interactions(write(tmp_path, "\n# only a comment\n"))


def test_duplicate_keeps_earliest_timestamp(tmp_path):
    path = write(tmp_path, "u1,i1,5,200\nu1,i2,4,150\nu1,i1,3,100\n")
    log = parse_interactions(path)
    assert len(log) == 2
    dup = log.frame[log.frame["item"] == "i1"].iloc[0]
    assert dup["timestamp"] == 100
    assert dup["rating"] == 3.0


def test_duplicate_without_timestamps_keeps_first(tmp_path):
    path = write(tmp_path, "u1 i1 5\nu1 i1 2\nu2 i1 1\n")
    log = parse_interactions(path, FORMATS["whitespace"])
    assert not log.has_timestamps
    assert log.frame["rating"].tolist() == [5.0, 1.0]


def test_partial_timestamps_are_dropped(tmp_path):
    path = write(tmp_path, "u1,i1,5,100\nu1,i2,4\n")
    log = parse_interactions(path)
    assert not log.has_timestamps
    assert len(log) == 2


def test_missing_rating_defaults_to_one(tmp_path):
    log = parse_interactions(write(tmp_path, "u1,i1\nu2,i1\n"))
    assert log.frame["rating"].tolist() == [1.0, 1.0]


def test_gowalla_iso_times_become_seconds(tmp_path):
    text = "0\t2010-10-19T23:55:27Z\t30.23\t-97.79\t22847\n0\t2010-10-19T23:56:27Z\t30.26\t-97.76\t420315\n"
    log = parse_interactions(write(tmp_path, text), FORMATS["gowalla"])
    assert log.frame["item"].tolist() == ["22847", "420315"]
    stamps = log.frame["timestamp"].tolist()
    assert stamps[1] - stamps[0] == 60


def test_format_needs_user_and_item():
    with pytest.raises(DatasetError):
        FormatSpec(",", ("user", "rating"))


def test_to_implicit_sets_every_rating_to_one():
    log = InteractionLog.from_records([("a", "x", 3.0), ("b", "x", 0.5)])
    assert to_implicit(log).frame["rating"].tolist() == [1.0, 1.0]
    assert log.frame["rating"].tolist() == [3.0, 0.5]


# --- k-core ----------------------------------------------------------------

def test_star_graph_two_core_is_empty():
    star = InteractionLog.from_records([("hub", f"i{j}") for j in range(5)])
    with pytest.raises(DatasetError):
        kcore_filter(star, 2)


def test_kcore_removes_pendant_user():
    records = [(u, i) for u in "abc" for i in "xyz"] + [("d", "x")]
    out = kcore_filter(InteractionLog.from_records(records), 3)
    assert len(out) == 9
    assert "d" not in set(out.frame["user"])


def test_kcore_is_idempotent_and_holds_invariant(synthetic_log):
    once = kcore_filter(synthetic_log, 5)
    twice = kcore_filter(once, 5)
    assert len(once) == len(twice)
    assert once.frame.groupby("user").size().min() >= 5
    assert once.frame.groupby("item").size().min() >= 5


def test_kcore_rejects_nonpositive_core(synthetic_log):
    with pytest.raises(ContractViolation):
        kcore_filter(synthetic_log, 0)


# --- remap / filtering ------------------------------------------------------

def test_remap_uses_first_appearance_order():
    log = InteractionLog.from_records([("u7", "i3"), ("u2", "i3"), ("u7", "i9")])
    remapped, maps = remap_ids(log)
    assert remapped.frame["user"].tolist() == [0, 1, 0]
    assert remapped.frame["item"].tolist() == [0, 0, 1]
    assert maps.user_token(0) == "u7"
    assert maps.item_id("i9") == 1
    assert maps.n_users == 2 and maps.n_items == 2


def test_drop_sparse_users():
    log = InteractionLog.from_records([("a", 1), ("a", 2), ("a", 3), ("b", 1), ("b", 2)])
    out = drop_sparse_users(log, 3)
    assert set(out.frame["user"]) == {"a"}


def test_subsample_users_is_seeded(synthetic_log):
    first = subsample_users(synthetic_log, 10, seed=3)
    second = subsample_users(synthetic_log, 10, seed=3)
    assert first.n_users == 10
    pd.testing.assert_frame_equal(first.frame, second.frame)
    assert subsample_users(synthetic_log, 1000, seed=3) is synthetic_log


# --- split ------------------------------------------------------------------

def dense(records):
    log, _ = remap_ids(InteractionLog.from_records(records))
    return log


def test_split_with_timestamps_holds_out_latest():
    log = dense([("a", "w", 1.0, 10), ("a", "x", 1.0, 40), ("a", "y", 1.0, 20), ("a", "z", 1.0, 30)])
    split = leave_one_out_split(log, seed=0)
    assert split.test.frame["item"].tolist() == [1]  # x, t=40
    assert split.validation.frame["item"].tolist() == [3]  # z, t=30
    assert sorted(split.train.frame["item"]) == [0, 2]


def test_random_split_is_deterministic_and_disjoint(synthetic_log):
    log, _ = remap_ids(InteractionLog(synthetic_log.frame.drop(columns="timestamp")))
    a = leave_one_out_split(log, seed=11)
    b = leave_one_out_split(log, seed=11)
    pd.testing.assert_frame_equal(a.test.frame, b.test.frame)
    pd.testing.assert_frame_equal(a.validation.frame, b.validation.frame)

    train_pairs = set(zip(a.train.frame["user"], a.train.frame["item"]))
    val_u, val_i = a.held_out("val")
    test_u, test_i = a.held_out("test")
    np.testing.assert_array_equal(val_u, np.arange(40))
    np.testing.assert_array_equal(test_u, np.arange(40))
    assert (val_i != test_i).all()
    assert not train_pairs & set(zip(val_u, val_i))
    assert not train_pairs & set(zip(test_u, test_i))
    assert len(a.train) + 2 * 40 == len(log)


def test_split_changes_with_seed(synthetic_log):
    log, _ = remap_ids(InteractionLog(synthetic_log.frame.drop(columns="timestamp")))
    a = leave_one_out_split(log, seed=1).held_out("test")[1]
    b = leave_one_out_split(log, seed=2).held_out("test")[1]
    assert not np.array_equal(a, b)


def test_strict_split_rejects_sparse_users():
    log = dense([("a", 1), ("a", 2), ("a", 3), ("b", 1), ("b", 2)])
    with pytest.raises(SplitError):
        leave_one_out_split(log, seed=0, strict=True)
    split = leave_one_out_split(log, seed=0)
    assert split.held_out("test")[0].tolist() == [0]
    assert set(split.train.frame["user"]) == {0}


def test_dropped_users_leave_the_index_space():
    # user "b" (id 1) has two records and sits between two full users
    log = dense([("a", 1), ("a", 2), ("a", 3), ("b", 1), ("b", 2), ("c", 1), ("c", 2), ("c", 3), ("c", 4)])
    split = leave_one_out_split(log, seed=0)
    assert split.n_users == 2
    assert sorted(set(split.train.frame["user"])) == [0, 1]
    assert split.held_out("test")[0].tolist() == [0, 1]
    assert split.held_out("val")[0].tolist() == [0, 1]
    assert (split.train.frame.groupby("user").size() == [1, 2]).all()


def test_explicit_user_space_with_sparse_users_is_rejected():
    log = dense([("a", 1), ("a", 2), ("a", 3), ("b", 1), ("b", 2)])
    with pytest.raises(ContractViolation):
        leave_one_out_split(log, seed=0, n_users=2)


def test_split_without_any_full_user():
    log = dense([("a", 1), ("a", 2), ("b", 1)])
    with pytest.raises(SplitError):
        leave_one_out_split(log, seed=0)


def test_split_needs_dense_ids():
    log = InteractionLog.from_records([("a", "x"), ("a", "y"), ("a", "z")])
    with pytest.raises(ContractViolation):
        leave_one_out_split(log, seed=0)


# --- stats ------------------------------------------------------------------

def test_dataset_stats():
    records = [(u, "a") for u in "pqrst"] + [("p", "b"), ("p", "c"), ("p", "d")]
    stats = dataset_stats(InteractionLog.from_records(records))
    assert (stats.n_users, stats.n_items, stats.n_interactions) == (5, 4, 8)
    assert stats.density_pct == pytest.approx(40.0)
    # 0.4 of the most popular item: 0.4 * 5 / 8
    assert stats.top_decile_share == pytest.approx(0.25)
    assert stats.lines()[0] == "users=5"


@pytest.mark.parametrize("n_items", [4, 15, 25])
def test_top_decile_share_of_uniform_log(n_items):
    records = [(u, i) for u in range(3) for i in range(n_items)]
    stats = dataset_stats(InteractionLog.from_records(records))
    assert stats.top_decile_share == pytest.approx(0.10)


def test_top_decile_share_counts_partial_items():
    # degrees 6,3,2,1,1 over 13 interactions; top 0.5 items = half of 6
    records = [(u, i) for i, deg in enumerate([6, 3, 2, 1, 1]) for u in range(deg)]
    stats = dataset_stats(InteractionLog.from_records(records))
    assert stats.top_decile_share == pytest.approx(3 / 13)


# --- canonical files ---------------------------------------------------------

def test_dataset_file_round_trip(tmp_path, synthetic_log):
    log, _ = remap_ids(to_implicit(synthetic_log))
    path = write_dataset(log, tmp_path / "interactions.tsv")
    assert path.read_text().splitlines()[0] == f"users=40 items={log.n_items} interactions={len(log)}"
    back, header = read_dataset(path)
    assert header["interactions"] == len(log)
    pd.testing.assert_frame_equal(back.frame, log.frame, check_dtype=False)


def test_split_file_round_trip_and_byte_identical_rerun(tmp_path, synthetic_log):
    log, _ = remap_ids(to_implicit(synthetic_log))
    split = leave_one_out_split(log, seed=5)
    first = write_split(split, tmp_path / "a.tsv")
    second = write_split(leave_one_out_split(log, seed=5), tmp_path / "b.tsv")
    assert first.read_bytes() == second.read_bytes()
    assert "seed=5" in first.read_text().splitlines()[0]

    back = read_split(first)
    assert (back.n_users, back.n_items, back.seed) == (split.n_users, split.n_items, 5)
    for ours, theirs in [(split.train, back.train), (split.validation, back.validation), (split.test, back.test)]:
        pd.testing.assert_frame_equal(theirs.frame, ours.frame, check_dtype=False)


def test_missing_timestamps_written_as_dash(tmp_path):
    log = dense([("a", "x"), ("a", "y"), ("b", "x")])
    path = write_dataset(log, tmp_path / "d.tsv")
    assert path.read_text().splitlines()[1] == "0\t0\t-"
    back, _ = read_dataset(path)
    assert not back.has_timestamps


def test_id_maps_round_trip(tmp_path):
    _, maps = remap_ids(InteractionLog.from_records([("u7", "i3"), ("u2", "i9")]))
    write_id_maps(maps, tmp_path)
    back = read_id_maps(tmp_path)
    assert back.user_tokens == ("u7", "u2")
    assert back.item_tokens == ("i3", "i9")


def test_read_split_missing_file(tmp_path):
    with pytest.raises(DatasetError):
        read_split(tmp_path / "split.tsv")

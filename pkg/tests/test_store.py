import json

import pytest

from cvp.graph import CausalGraph
from cvp.store import GraphStore, RevisionConflictError


@pytest.fixture
def store(tmp_path):
    return GraphStore(tmp_path)


def test_create_get_round_trip(store, world):
    record = store.create(world)
    assert record.revision == 1
    assert len(record.id) == 12
    assert store.get(record.id).graph == world


def test_reload_preserves_records(tmp_path, world, collider):
    store = GraphStore(tmp_path)
    r1 = store.create(world)
    r2 = store.create(collider)
    store.update(r2.id, collider.rename("v2"), expected_revision=1)

    reloaded = GraphStore(tmp_path)
    assert {r.id for r in reloaded.list_records()} == {r1.id, r2.id}
    assert reloaded.get(r1.id) == store.get(r1.id)
    assert reloaded.get(r2.id).revision == 2
    assert reloaded.get(r2.id).graph.name == "v2"


def test_corrupt_file_skipped_with_warning(tmp_path, world, collider, caplog):
    store = GraphStore(tmp_path)
    keep = store.create(world)
    corrupt = store.create(collider)
    (tmp_path / "graphs" / f"{corrupt.id}.json").write_text("{not json", "utf-8")

    with caplog.at_level("WARNING", logger="cvp.store"):
        reloaded = GraphStore(tmp_path)
    assert [r.id for r in reloaded.list_records()] == [keep.id]
    assert any("corrupt" in rec.message for rec in caplog.records)


def test_invalid_graph_file_skipped(tmp_path, world):
    store = GraphStore(tmp_path)
    record = store.create(world)
    path = tmp_path / "graphs" / f"{record.id}.json"
    obj = json.loads(path.read_text("utf-8"))
    obj["graph"]["edges"].append({"from": "Y", "to": "C"})  # introduces a cycle
    path.write_text(json.dumps(obj), "utf-8")
    assert GraphStore(tmp_path).get(record.id) is None


def test_rapid_updates_increment_revision(store, world):
    record = store.create(world)
    r2 = store.update(record.id, world.rename("a"), expected_revision=1)
    r3 = store.update(record.id, world.rename("b"), expected_revision=2)
    assert (r2.revision, r3.revision) == (2, 3)
    assert store.get(record.id).graph.name == "b"


def test_stale_revision_conflict(store, world):
    record = store.create(world)
    store.update(record.id, world.rename("a"), expected_revision=1)
    with pytest.raises(RevisionConflictError) as exc:
        store.update(record.id, world.rename("b"), expected_revision=1)
    assert exc.value.current_revision == 2
    assert store.get(record.id).graph.name == "a"  # no state change


def test_delete(store, world):
    record = store.create(world)
    assert store.delete(record.id)
    assert store.get(record.id) is None
    assert not store.delete(record.id)
    assert not (store.graphs_dir / f"{record.id}.json").exists()


def test_ids_unique_for_identical_content(store, world):
    ids = {store.create(world).id for _ in range(20)}
    assert len(ids) == 20


def test_no_temp_files_left_behind(store, world):
    for _ in range(5):
        store.create(world)
    leftovers = [p for p in store.graphs_dir.iterdir() if not p.suffix == ".json"]
    assert leftovers == []

import json

import pytest
from fastapi.testclient import TestClient

import knowmap.session
from knowmap.graph import save_graph
from knowmap.ranking import RankingConfig
from knowmap.service import ServiceConfig, create_app
from knowmap.session import add_landmark, create_map, refresh, star_document

DISEASES = ["disease:covid-19", "disease:alzheimers-disease", "disease:dementia"]


@pytest.fixture(scope="module")
def graph_dir(usecase_graph, tmp_path_factory):
    directory = tmp_path_factory.mktemp("graph")
    save_graph(usecase_graph, directory)
    return directory


@pytest.fixture(scope="module")
def client(graph_dir):
    app = create_app(ServiceConfig(graph_dir=graph_dir, cors_origins=["http://ui.test"]))
    with TestClient(app) as test_client:
        yield test_client


def make_map(client):
    response = client.post("/maps")
    assert response.status_code == 201
    return response.json()["map_id"]


class TestSearch:
    def test_covid_entity_first(self, client):
        body = client.get("/search", params={"q": "COVID-19"}).json()
        entities = body["entities"]
        assert entities[0]["item_id"] == "disease:covid-19"
        assert entities[0]["canonical_name"] == "COVID-19"
        assert entities[0]["entity_type"] == "disease"

    def test_no_match_returns_empty_lists(self, client):
        response = client.get("/search", params={"q": "zzzz-no-match"})
        assert response.status_code == 200
        body = response.json()
        assert body["publications"] == []
        assert body["clinical_trials"] == []

    def test_empty_query_400(self, client):
        assert client.get("/search", params={"q": ""}).status_code == 400
        assert client.get("/search", params={"q": "   "}).status_code == 400

    def test_kind_filter(self, client):
        body = client.get("/search", params={"q": "dementia", "kind": "publication"}).json()
        assert "publications" in body
        assert "clinical_trials" not in body

    def test_documents_carry_title(self, client):
        body = client.get("/search", params={"q": "dementia"}).json()
        assert all("title" in row for row in body["publications"])


class TestMapLifecycle:
    def test_create_and_get(self, client):
        map_id = make_map(client)
        body = client.get(f"/maps/{map_id}").json()
        assert body["landmarks"] == []
        assert body["dirty"] is True
        assert "map_fingerprint" in body

    def test_unknown_map_404(self, client):
        assert client.get("/maps/nope").status_code == 404
        assert client.post("/maps/nope/refresh").status_code == 404

    def test_star_sets_dirty(self, client):
        map_id = make_map(client)
        response = client.post(f"/maps/{map_id}/stars", json={"doc_id": "pmid:33559975"})
        assert response.status_code == 200
        assert response.json()["dirty"] is True
        assert response.json()["starred_docs"] == ["pmid:33559975"]

    def test_unknown_graph_id_422(self, client):
        map_id = make_map(client)
        response = client.post(f"/maps/{map_id}/landmarks", json={"entity_id": "gene:nope"})
        assert response.status_code == 422
        response = client.post(f"/maps/{map_id}/stars", json={"doc_id": "pmid:nope"})
        assert response.status_code == 422

    def test_delete_absent_landmark_is_noop(self, client):
        map_id = make_map(client)
        client.post(f"/maps/{map_id}/refresh")
        before = client.get(f"/maps/{map_id}").json()
        response = client.request("DELETE", f"/maps/{map_id}/landmarks",
                                  json={"entity_id": "disease:delirium"})
        assert response.status_code == 200
        assert response.json()["dirty"] == before["dirty"] is False

    def test_results_409_before_refresh(self, client):
        map_id = make_map(client)
        assert client.get(f"/maps/{map_id}/results").status_code == 409

    def test_refresh_then_results(self, client):
        map_id = make_map(client)
        client.post(f"/maps/{map_id}/landmarks", json={"entity_id": DISEASES[0]})
        snapshot = client.post(f"/maps/{map_id}/refresh").json()
        assert snapshot["dirty"] is False
        results = client.get(f"/maps/{map_id}/results", params={"kind": "publication"}).json()
        assert results["publications"] == snapshot["publications"]
        assert "clinical_trials" not in results

    def test_results_stale_after_mutation(self, client):
        # the banner condition: old snapshot plus dirty=true
        map_id = make_map(client)
        client.post(f"/maps/{map_id}/refresh")
        first = client.get(f"/maps/{map_id}/results").json()
        client.post(f"/maps/{map_id}/stars", json={"doc_id": "pmid:33559975"})
        stale = client.get(f"/maps/{map_id}/results").json()
        assert stale["dirty"] is True
        assert stale["computed_at"] == first["computed_at"]
        assert stale["snapshot_fingerprint"] != stale["map_fingerprint"]

    def test_results_never_recompute(self, client, monkeypatch):
        map_id = make_map(client)
        client.post(f"/maps/{map_id}/refresh")
        calls = []
        real_refresh = knowmap.session.refresh

        def spy(*args, **kwargs):
            calls.append(1)
            return real_refresh(*args, **kwargs)

        monkeypatch.setattr(knowmap.session, "refresh", spy)
        for _ in range(5):
            client.get(f"/maps/{map_id}/results")
        assert calls == []

    def test_get_endpoints_do_not_mutate(self, client):
        map_id = make_map(client)
        client.post(f"/maps/{map_id}/landmarks", json={"entity_id": DISEASES[1]})
        client.post(f"/maps/{map_id}/refresh")
        before = client.get(f"/maps/{map_id}").json()
        client.get(f"/maps/{map_id}/results")
        client.get(f"/maps/{map_id}/cards/{DISEASES[1]}")
        assert client.get(f"/maps/{map_id}").json() == before


class TestCardsEndpoint:
    def test_card_sections(self, client):
        map_id = make_map(client)
        for disease in DISEASES:
            client.post(f"/maps/{map_id}/landmarks", json={"entity_id": disease})
        client.post(f"/maps/{map_id}/refresh")
        card = client.get(f"/maps/{map_id}/cards/disease:covid-19").json()
        assert card["canonical_name"] == "COVID-19"
        assert [s["name"] for s in card["sections"]] == [
            "related publications", "related clinical trials",
            "associated genes", "associated drugs"]

    def test_unknown_entity_404(self, client):
        map_id = make_map(client)
        assert client.get(f"/maps/{map_id}/cards/gene:ghost").status_code == 404


class TestFacadeFidelity:
    def test_api_matches_direct_session_calls(self, client, usecase_graph, usecase_index):
        map_id = make_map(client)
        for disease in DISEASES:
            client.post(f"/maps/{map_id}/landmarks", json={"entity_id": disease})
        client.post(f"/maps/{map_id}/stars", json={"doc_id": "pmid:33559975"})
        api_items = client.post(f"/maps/{map_id}/refresh").json()["publications"]

        kmap = create_map()
        for disease in DISEASES:
            add_landmark(kmap, usecase_graph, disease)
        star_document(kmap, usecase_graph, "pmid:33559975")
        snapshot = refresh(kmap, usecase_graph, usecase_index)
        direct = [{"item_id": i.item_id, "kind": i.kind, "score": i.score,
                   "text_sim": i.text_sim, "graph_prox": i.graph_prox, "rank": i.rank}
                  for i in snapshot.publications]
        assert api_items == direct


class TestCorsAndConfig:
    def test_cors_header_for_allowed_origin(self, client):
        response = client.get("/search", params={"q": "dementia"},
                              headers={"Origin": "http://ui.test"})
        assert response.headers.get("access-control-allow-origin") == "http://ui.test"

    def test_config_file_and_env_overrides(self, graph_dir, tmp_path, monkeypatch):
        config_path = tmp_path / "service.json"
        config_path.write_text(json.dumps({
            "graph_dir": str(graph_dir),
            "port": 9100,
            "cors_origins": ["http://a.test"],
            "ranking": {"top_k": 5},
        }))
        config = ServiceConfig.from_file(config_path)
        assert config.port == 9100
        assert config.ranking.top_k == 5
        monkeypatch.setenv("KNOWMAP_PORT", "9200")
        monkeypatch.setenv("KNOWMAP_GRAPH_DIR", str(graph_dir))
        config.apply_env()
        assert config.port == 9200
        assert config.graph_dir == graph_dir

    def test_state_persists_across_restart(self, graph_dir, tmp_path):
        state_path = tmp_path / "maps.json"
        config = ServiceConfig(graph_dir=graph_dir, state_path=state_path)
        with TestClient(create_app(config)) as first:
            map_id = first.post("/maps").json()["map_id"]
            first.post(f"/maps/{map_id}/landmarks", json={"entity_id": DISEASES[0]})
        assert state_path.exists()
        with TestClient(create_app(config)) as second:
            body = second.get(f"/maps/{map_id}").json()
            assert body["landmarks"] == [DISEASES[0]]


def test_ranking_config_override_on_create(client):
    response = client.post("/maps", json={"config": {"top_k": 3}})
    map_id = response.json()["map_id"]
    client.post(f"/maps/{map_id}/refresh")
    results = client.get(f"/maps/{map_id}/results").json()
    assert len(results["publications"]) == 3

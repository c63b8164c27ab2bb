"""JSON API"""
import json

import pytest

from src.ui.app import app


@pytest.fixture
def client(tmp_path):
    app.config['TESTING'] = True
    app.config['LEDGER_PATH'] = tmp_path / "api_ledger.db"
    with app.test_client() as client:
        yield client


def document(examples_dir, name):
    return json.loads((examples_dir / name).read_text(encoding="utf-8"))


class TestOperations:

    def test_predict(self, client, examples_dir):
        response = client.post('/api/predict', json={'network': document(examples_dir, "n1.json")})
        assert response.status_code == 200
        body = response.get_json()
        assert body['results']['plausible']['wet'] == ["false"]
        assert body['run_id']

    def test_predict_with_evidence(self, client, examples_dir):
        response = client.post('/api/predict', json={'network': document(examples_dir, "n1.json"),
                                                     'evidence': {'rain': 'true'}})
        assert response.get_json()['results']['plausible']['wet'] == ["true"]
        assert 'evidence' in response.get_json()['inputs']

    def test_scomplete(self, client, examples_dir):
        response = client.post('/api/scomplete', json={'network': document(examples_dir, "diamond.json")})
        body = response.get_json()
        assert body['results']['plausible']['d'] == ["true"]
        assert body['results']['stages'][0]['cs'] == ["a"]

    def test_check_with_believed(self, client, examples_dir):
        response = client.post('/api/check', json={'network': document(examples_dir, "diamond.json"),
                                                   'believed': ["a"]})
        assert response.get_json()['results']['verdict'] == "complete"

    def test_abstract_returns_network(self, client, examples_dir):
        response = client.post('/api/abstract', json={'network': document(examples_dir, "chain.json"), 'eps': 0.1})
        body = response.get_json()
        assert body['network']['kind'] == "kappa"
        assert body['results']['shifts'] == []

    @pytest.mark.parametrize("method", ["exact", "bounded", "search"])
    def test_infer(self, client, examples_dir, method):
        response = client.post('/api/infer', json={'network': document(examples_dir, "and_network.json"),
                                                   'query': 'y=true', 'method': method, 'eps': 0.01})
        assert response.status_code == 200
        body = response.get_json()
        assert body['command'] == f"infer {method}"

    def test_infer_query_object(self, client, examples_dir):
        response = client.post('/api/infer', json={'network': document(examples_dir, "and_network.json"),
                                                   'query': {'y': 'true'}})
        assert response.get_json()['results']['probability'] == pytest.approx(0.9 ** 3)


class TestErrors:

    def test_body_must_be_json(self, client):
        response = client.post('/api/predict', data="not json", content_type='text/plain')
        assert response.status_code == 400

    def test_missing_network(self, client):
        assert client.post('/api/predict', json={}).status_code == 400

    def test_invalid_network_has_location(self, client, examples_dir):
        doc = document(examples_dir, "n1.json")
        del doc['tables'][2]['default']
        response = client.post('/api/predict', json={'network': doc})
        assert response.status_code == 400
        assert response.get_json()['location'] == "tables[wet]"

    def test_cap_exceeded(self, client, examples_dir):
        response = client.post('/api/scomplete', json={'network': document(examples_dir, "diamond.json"),
                                                       'cs_cap': 1})
        assert response.status_code == 422
        assert response.get_json()['partial']['plausible']['d'] == ["true", "false"]

    def test_missing_query(self, client, examples_dir):
        response = client.post('/api/infer', json={'network': document(examples_dir, "chain.json")})
        assert response.status_code == 400


class TestRuns:

    def test_runs_and_statistics(self, client, examples_dir):
        run_id = client.post('/api/predict', json={'network': document(examples_dir, "n1.json")}).get_json()['run_id']
        client.post('/api/scomplete', json={'network': document(examples_dir, "diamond.json"), 'cs_cap': 1})

        runs = client.get('/api/runs').get_json()
        assert [record['command'] for record in runs] == ["scomplete", "predict"]
        assert client.get('/api/runs?command=predict').get_json()[0]['run_id'] == run_id

        record = client.get(f'/api/runs/{run_id}').get_json()
        assert record['results']['plausible']['rain'] == ["false"]

        stats = client.get('/api/statistics').get_json()
        assert stats['total_runs'] == 2
        assert stats['failed_runs'] == 1

    def test_unknown_run(self, client):
        assert client.get('/api/runs/missing').status_code == 404

"""
Flask JSON API
Serves the same operations as the command line; every request body carries
the network document inline. Runs are recorded in the run ledger.
"""
import json
import logging
from typing import Callable, Dict, Optional

from flask import Flask, jsonify, request
from flask_cors import CORS
from werkzeug.exceptions import BadRequest

from ..config import Config
from ..errors import CapExceededError, KappaNetError
from ..model.io import parse_assignment, parse_name_list, parse_network, parse_query
from ..operations import RunReport, digest, run_abstract, run_check, run_infer, run_predict, run_scomplete
from ..run_ledger import RunLedger

logger = logging.getLogger(__name__)

app = Flask(__name__)
CORS(app)
app.config['LEDGER_PATH'] = Config.LEDGER_PATH


def get_ledger() -> RunLedger:
    """Ledger for the configured path, opened once per path"""
    path = str(app.config['LEDGER_PATH'])
    ledger = app.extensions.get('run_ledger')
    if ledger is None or str(ledger.db_path) != path:
        ledger = RunLedger(path)
        app.extensions['run_ledger'] = ledger
    return ledger


def _body() -> Dict:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise BadRequest("request body must be a JSON object")
    if 'network' not in data:
        raise BadRequest("request body needs a 'network' document")
    return data


def _digests(data: Dict) -> Dict[str, str]:
    return {key: digest(json.dumps(data[key], sort_keys=True).encode("utf-8"))
            for key in ('network', 'evidence', 'actions', 'believed') if data.get(key) is not None}


def _optional_assignment(data: Dict, key: str):
    return parse_assignment(data[key], key) if data.get(key) is not None else None


def _handle(command: str, work: Callable[[Dict, RunReport], Optional[Dict]]):
    """Run one operation and map engine errors onto status codes"""
    try:
        data = _body()
        report = RunReport(command, _digests(data))
        extra = work(data, report)
        report.finish()
    except BadRequest as e:
        return jsonify({'error': e.description}), 400
    except CapExceededError as e:
        logger.warning("request stopped at enumeration cap", extra={"command": command, "cap": e.cap})
        partial = e.partial.to_dict() if hasattr(e.partial, 'to_dict') else None
        get_ledger().log_run({'command': command, 'results': {'error': str(e)}}, exit_code=3)
        return jsonify({'error': str(e), 'cap': e.cap, 'size': e.size, 'partial': partial}), 422
    except (KappaNetError, ValueError) as e:
        get_ledger().log_run({'command': command, 'results': {'error': str(e)}}, exit_code=2)
        return jsonify({'error': str(e), 'location': getattr(e, 'location', None)}), 400
    except Exception as e:
        logger.exception("request failed", extra={"command": command})
        return jsonify({'error': str(e)}), 500

    body = report.to_dict()
    body['run_id'] = get_ledger().log_run(report.to_dict())
    if extra is not None:
        body['network'] = extra
    return jsonify(body), 200


@app.route('/api/predict', methods=['POST'])
def predict_endpoint():
    """Plausible sets by one Predict sweep"""
    def work(data, report):
        run_predict(report, parse_network(data['network']), _optional_assignment(data, 'evidence'),
                    _optional_assignment(data, 'actions'))
    return _handle('predict', work)


@app.route('/api/scomplete', methods=['POST'])
def scomplete_endpoint():
    def work(data, report):
        run_scomplete(report, parse_network(data['network']), _optional_assignment(data, 'evidence'),
                      _optional_assignment(data, 'actions'), cs_cap=data.get('cs_cap') or Config.CS_CAP)
    return _handle('scomplete', work)


@app.route('/api/check', methods=['POST'])
def check_endpoint():
    def work(data, report):
        believed = parse_name_list(data['believed'], 'believed') if data.get('believed') is not None else None
        run_check(report, parse_network(data['network']), believed, _optional_assignment(data, 'evidence'),
                  _optional_assignment(data, 'actions'))
    return _handle('check', work)


@app.route('/api/abstract', methods=['POST'])
def abstract_endpoint():
    """Epsilon-OMP; the kappa network is returned under 'network'"""
    def work(data, report):
        return run_abstract(report, parse_network(data['network']), float(data.get('eps', Config.DEFAULT_EPSILON)))
    return _handle('abstract', work)


@app.route('/api/infer', methods=['POST'])
def infer_endpoint():
    """
    Probability query

    Body fields: network, query ('var=val,...' or an object), method
    ('exact', 'bounded' or 'search'), evidence, eps, budget, strategy,
    cutset, time_limit
    """
    def work(data, report):
        query = data.get('query')
        if not query:
            raise BadRequest("request body needs a 'query'")
        target = parse_query(query) if isinstance(query, str) else parse_assignment(query, 'query')
        method = data.get('method', 'exact')
        report.command = f"infer {method}"
        run_infer(report, method, parse_network(data['network']), target, _optional_assignment(data, 'evidence'),
                  eps=data.get('eps'), budget=data.get('budget'), strategy=data.get('strategy', 'none'),
                  cutset=data.get('cutset'), time_limit=data.get('time_limit'))
    return _handle('infer', work)


@app.route('/api/runs')
def get_runs():
    """Recent runs, optionally for one command"""
    limit = request.args.get('limit', 100, type=int)
    command = request.args.get('command')
    return jsonify(get_ledger().get_runs(limit, command))


@app.route('/api/runs/<run_id>')
def get_run(run_id):
    run = get_ledger().get_run(run_id)
    if not run:
        return jsonify({'error': 'Run not found'}), 404
    return jsonify(run)


@app.route('/api/statistics')
def get_statistics():
    return jsonify(get_ledger().get_statistics())


def run_server(host: Optional[str] = None, port: Optional[int] = None, debug: bool = False):
    """Run Flask server"""
    host = host or Config.API_HOST
    port = port or Config.API_PORT
    logger.info("api server starting", extra={"host": host, "port": port,
                                              "ledger": str(app.config['LEDGER_PATH'])})
    app.run(host=host, port=port, debug=debug)


if __name__ == '__main__':
    run_server(debug=True)

import logging

from dotenv import load_dotenv
from flask import Flask, jsonify, request
from flask_cors import CORS

import workflow
from conditions import ConditionFamily, family_constraints
from utils import Utils

load_dotenv()

utils = Utils()
logging.basicConfig(level=utils.log_level, format="%(asctime)s [%(levelname)s] %(message)s")

app = Flask(__name__)
CORS(app)


@app.route("/", methods=["GET"])
def home():
    families = [{"name": family.value, "constraints": family_constraints(family)} for family in ConditionFamily]
    return jsonify({"families": families, "commands": list(workflow.ROUTES)})


@app.route("/invoke", methods=["POST"])
def invoke_workflow():
    data = request.get_json(silent=True)
    if not isinstance(data, dict) or "command" not in data:
        return jsonify({"error": "command is required"}), 400

    status, payload = workflow.invoke(data, utils)
    return app.response_class(utils.format_report(payload), status=status, mimetype="application/json")


if __name__ == "__main__":
    app.run(debug=True)

import json
import logging
from typing import Any

from rest_framework import serializers

from .files import SystemFile
from .serializers import SystemFileSerializer

logger = logging.getLogger(__name__)


def canonical_json(data: "Any") -> str:
    return json.dumps(data, indent=2) + "\n"


def load_system_data(text: str, source: str = "<string>") -> "SystemFile":
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise serializers.ValidationError(
            {"file": [f"{source}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"]}
        )
    serializer = SystemFileSerializer(data=data)
    serializer.is_valid(raise_exception=True)
    system_file = serializer.save()
    logger.debug("Parsed %s system file %s", system_file.mode.value, source)
    return system_file


def parse_system_file(path) -> "SystemFile":
    """Reads and validates a system file; errors are DRF ValidationErrors."""
    with open(path) as f:
        text = f.read()
    return load_system_data(text, str(path))


def dump_system_file(system_file: "SystemFile") -> str:
    return canonical_json(SystemFileSerializer(system_file.data).data)

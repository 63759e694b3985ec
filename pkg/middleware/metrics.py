# middleware/metrics.py
from prometheus_client import REGISTRY, Counter, Histogram


def _counter(name: str, documentation: str, labels=()):
    existing = REGISTRY._names_to_collectors.get(name)
    return existing if existing is not None else Counter(name, documentation, list(labels))


def _histogram(name: str, documentation: str, labels=()):
    existing = REGISTRY._names_to_collectors.get(name)
    return existing if existing is not None else Histogram(name, documentation, list(labels))


# HTTP
REQUEST_COUNT = _counter('http_requests_total', 'Total HTTP requests', ['method', 'endpoint', 'status'])
REQUEST_DURATION = _histogram('http_request_duration_seconds', 'HTTP request duration', ['method', 'endpoint'])

# Groebner engine
GB_RUNS = _counter('groebner_runs_total', 'Buchberger runs', ['outcome'])
REDUCTION_STEPS = _counter('groebner_reduction_steps_total', 'Reduction steps across all normal forms')
BASIS_CACHE = _counter('basis_cache_lookups_total', 'Basis cache lookups', ['result'])

# Decomposition
VERIFY_DURATION = _histogram('verification_duration_seconds', 'verify_decomposition wall time', ['verdict'])

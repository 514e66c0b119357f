from .app import ServiceConfig, create_app
from .store import Store, sha256_bytes, short_hash

__all__ = ["ServiceConfig", "Store", "create_app", "sha256_bytes", "short_hash"]

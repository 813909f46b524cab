from adff.core.settings import settings, AppEnvironment

__all__ = ["settings", "AppEnvironment"]

from adff.utils.common import content_hash, format_pm, seed_everything

__all__ = ["content_hash", "format_pm", "seed_everything"]

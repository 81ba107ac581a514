"""Request/response models, handlers, and the HTTP app around the toolkit."""

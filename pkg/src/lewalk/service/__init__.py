"""HTTP service exposing the library: pydantic request/response models and
the FastAPI application. The CLI is a thin client of these handlers."""

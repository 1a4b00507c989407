"""FastAPI application exposing every subcommand as a POST endpoint.

Mathematical precondition violations map to HTTP 422 with the reason in
the detail field; malformed payloads are rejected by pydantic with the
usual 422 validation errors carrying a `loc` list (the CLI distinguishes
the two shapes).
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import PreconditionError
from . import service
from . import schemas as sch

ROUTES = {
    "stability": "/stability",
    "hyperbolicity": "/hyperbolicity",
    "cone": "/cone",
    "newton": "/newton",
    "pf": "/pf",
    "multiplier": "/multiplier",
    "matchings": "/matchings",
    "forests": "/forests",
    "sr-audit": "/sr/audit",
    "sr-closure": "/sr/closure",
    "exclusion": "/sr/exclusion",
    "detmeasure": "/sr/detmeasure",
    "coupling": "/sr/coupling",
    "permanent": "/perm/permanent",
    "capacity": "/perm/capacity",
    "gurvits": "/perm/gurvits",
    "bregman": "/perm/bregman",
    "mmcpt": "/perm/mmcpt",
    "bmv": "/perm/bmv",
    "aztec": "/aztec",
}


def create_app() -> FastAPI:
    app = FastAPI(title="stablekit", version=__version__)

    @app.get("/health")
    def health() -> dict:
        return {"tool": "stablekit", "version": __version__}

    def make_endpoint(handler):
        def endpoint(req):  # signature patched below for FastAPI's inspection
            try:
                return handler(req)
            except PreconditionError as exc:
                raise HTTPException(status_code=422, detail=str(exc))

        return endpoint

    for name, path in ROUTES.items():
        model, handler = service.HANDLERS[name]
        endpoint = make_endpoint(handler)
        endpoint.__annotations__ = {"req": model, "return": dict}
        app.post(path, name=name)(endpoint)

    return app


app = create_app()

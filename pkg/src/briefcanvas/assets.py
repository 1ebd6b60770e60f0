"""URL convention for stored assets.

Prompt construction, logo adherence checking, and the HTTP asset routes all
have to agree on how an asset id becomes a URL; this is the single source.
"""


def asset_url(asset_id: str) -> str:
    return f"/assets/{asset_id}"

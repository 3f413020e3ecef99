import json
from pathlib import Path
from typing import Any

from jinja2 import BaseLoader, Environment, StrictUndefined
from jinja2.exceptions import TemplateNotFound
from jinja2.loaders import FileSystemLoader, PrefixLoader
from pydantic import BaseModel

REPORTS_PATH = Path(__file__).parent / "reports"


def _finalize_pydantic(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return json.dumps(value.model_dump(mode="json"), indent=4)
    return value


def _scientific(value: float | None, digits: int = 3) -> str:
    if value is None:
        return "-"
    return f"{value:.{digits}e}"


def _point(values: list[float], digits: int = 4) -> str:
    return "(" + ", ".join(f"{v:.{digits}g}" for v in values) + ")"


class ReportsLoader(PrefixLoader):
    """``namespace::name`` lookups; names without a namespace use the package reports."""

    def get_loader(self, template: str) -> tuple[BaseLoader, str]:
        try:
            prefix, name = template.split(self.delimiter, 1)
        except ValueError:
            prefix = "__default__"
            name = template

        try:
            loader = self.mapping[prefix]
        except KeyError as e:
            raise TemplateNotFound(template) from e

        return loader, name


def create_report_environment(loader_mapping: dict[str, Path] | None = None) -> Environment:
    """Create the Jinja2 environment rendering text reports."""
    mapping = {"__default__": REPORTS_PATH, **(loader_mapping or {})}
    env = Environment(
        loader=ReportsLoader(
            {namespace: FileSystemLoader(path) for namespace, path in mapping.items()},
            delimiter="::",
        ),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
        undefined=StrictUndefined,
        autoescape=False,
        finalize=_finalize_pydantic,
    )
    env.filters["sci"] = _scientific
    env.filters["point"] = _point
    return env


def render_report(template_name: str, **variables: Any) -> str:
    """Render one of the text report templates."""
    return create_report_environment().get_template(template_name).render(**variables)

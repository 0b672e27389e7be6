"""Command line: run the HTTP service or batch-export a corpus to SCEB."""

from __future__ import annotations

import sys

import click

from .encoder import EncoderError, POOLINGS, make_encoder
from .exporter import ExportError, export_corpus
from .service import create_app


@click.group()
def main():
    """Code embedding service and exporter."""


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8230, show_default=True)
@click.option("--model", "model_path", default=None,
              help="local encoder checkpoint directory; hashing encoder if omitted")
def serve(host, port, model_path):
    """Start the embedding HTTP service."""
    import uvicorn

    uvicorn.run(create_app(model_path), host=host, port=port)


@main.command()
@click.option("--input", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--output", "output_path", required=True, type=click.Path())
@click.option("--model", "model_path", default=None,
              help="local encoder checkpoint directory; hashing encoder if omitted")
@click.option("--pooling", type=click.Choice(list(POOLINGS)), default="first_last_avg",
              show_default=True)
@click.option("--max-length", default=256, show_default=True)
@click.option("--batch-size", default=32, show_default=True)
def export(corpus_path, output_path, model_path, pooling, max_length, batch_size):
    """Encode a corpus file and write the SCEB embedding container."""
    try:
        encoder = make_encoder(model_path)
        count = export_corpus(encoder, corpus_path, output_path, pooling, max_length,
                              batch_size)
    except (ExportError, EncoderError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"exported {count} embeddings to {output_path}")


if __name__ == "__main__":
    main()

import typer

from .run import (
    decompose,
    diameter,
    maximize,
    norms,
    opnorm,
    rearrange,
    sweep,
    tails,
    tightness,
)


app = typer.Typer(no_args_is_help=True)
app.command()(norms)
app.command()(rearrange)
app.command()(tails)
app.command()(decompose)
app.command()(opnorm)
app.command()(maximize)
app.command()(diameter)
app.command()(tightness)
app.command()(sweep)


if __name__ == "__main__":
    app()

import click

from .classify import classify
from .skeleton import skeleton
from .shoot import shoot
from .simulate import simulate, modulate
from .figure import figure


def register_commands(group: click.Group):
    """Wire up the wcusp commands to `group`."""
    group.add_command(classify)
    group.add_command(skeleton)
    group.add_command(shoot)
    group.add_command(simulate)
    group.add_command(modulate)
    group.add_command(figure)

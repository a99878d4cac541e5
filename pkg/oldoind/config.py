import logging
from argparse import ArgumentParser, Namespace
from ast import literal_eval
from configparser import ConfigParser
from typing import Any, Dict, List, Optional, Sequence, Text, TextIO, Tuple

logger = logging.getLogger(__name__)


class ArgConfParser(ArgumentParser):
    """
    An argparse.ArgumentParser that fills option defaults from an INI file.

    Sections of the file are argument group titles, keys are option
    destinations and values are Python literals. Positional arguments are
    never read from the file. Precedence is parser default, then file,
    then command line.

    Parameters
    ----------
    config_dest: str
        Destination of the option naming the configuration file.
    """

    def __init__(self, *args, config_dest: Optional[str] = None, **kwargs):
        super().__init__(*args, **kwargs)
        self.config_dest = config_dest

    def _option_groups(self):
        for group in self._action_groups:
            # untitled and positional groups carry no configuration
            if not isinstance(group.title, str) or group.title == "positional arguments":
                continue
            actions = [action for action in group._group_actions if action.option_strings and action.dest != "help"]
            if actions:
                yield group.title, actions

    def parse_known_args(self, args: Optional[Sequence[Text]] = None, namespace: Optional[Namespace] = None) -> Tuple[Namespace, List[str]]:
        """
        Parse the arguments on top of the configuration file.

        Parameters
        ----------
        args: typing.Optional[typing.Sequence[str]]
            The list of arguments to parse.
        namespace: typing.Optional[argparse.Namespace]
            An optional initial namespace.

        Returns
        -------
        argparse.Namespace
            The parsed namespace.
        typing.List[str]
            The remaining arguments.
        """
        if self.config_dest is None:
            return super().parse_known_args(args=args, namespace=namespace)

        # a first pass only locates the configuration file
        probe, _ = super().parse_known_args(args=args)
        path = getattr(probe, self.config_dest, None)

        namespace = namespace if namespace is not None else Namespace()
        if path:
            for dest, value in self.read_config(path).items():
                setattr(namespace, dest, value)

        return super().parse_known_args(args=args, namespace=namespace)

    def read_config(self, path: str) -> Dict[str, Any]:
        """
        Read option values from a configuration file; missing files yield no values.

        Parameters
        ----------
        path: str
            The path to the config file.

        Returns
        -------
        typing.Dict[str, typing.Any]
        """
        config = ConfigParser()
        if not config.read(path):
            logger.debug(f"no configuration read from {path}")
            return {}

        values = {}
        for title, actions in self._option_groups():
            if title not in config:
                continue
            for action in actions:
                if action.dest in config[title]:
                    values[action.dest] = literal_eval(config[title][action.dest])

        logger.debug(f"configuration {path}: {values}")
        return values

    def write_config(self, args: Namespace, file: TextIO, help: bool = False):
        """
        Write the option values of a namespace as a configuration file.

        Parameters
        ----------
        args: argparse.Namespace
            The namespace to write.
        file: typing.TextIO
            The file to write to.
        help: bool
            Whether to precede every value with its help text.
        """
        config = ConfigParser(allow_no_value=help)

        for title, actions in self._option_groups():
            config[title] = {}
            for action in actions:
                if action.dest not in vars(args) or action.dest == self.config_dest:
                    continue
                if help:
                    config.set(title, f"# {action.help}")
                config[title][action.dest] = repr(getattr(args, action.dest))

        config.write(file)

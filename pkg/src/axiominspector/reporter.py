import logging
import os
import sys
from pathlib import Path

from termcolor import colored

from axiominspector.checker import CheckEvent

LOGGER = logging.getLogger(Path(__file__).name)


class ConsoleReporter:
    def __init__(self):
        self.has_unfinished_line = False

    def print_indented(self, prefix, text, color):
        if not text:
            prefix += " (none)"
        print(colored(prefix, "light_grey"))
        for line in text.splitlines():
            print(colored(f"{' ' * 3} {line.strip()}", color))

    def reset_line(self):
        if "TERM" in os.environ:
            sys.stdout.write("\033[2K\033[1G")
        else:
            sys.stdout.write("\n")

    def print(self, *args, **kwargs):
        if kwargs.get("end", None) == "":
            self.has_unfinished_line = True
        elif self.has_unfinished_line:
            self.reset_line()
            self.has_unfinished_line = False

        print(*args, **kwargs)

        if self.has_unfinished_line:
            sys.stdout.flush()

    def __call__(self, event, transformation, **kwargs):
        if event == CheckEvent.CHECK_STARTING:
            end = "" if logging.root.level > logging.DEBUG else "\n"
            self.print(colored(f"CHK  {transformation}", "light_grey"), end=end)
        elif event == CheckEvent.ERROR:
            self.print(colored(f"ERR  {transformation}", "red"))
            self.print(colored("  " + kwargs["message"], "red"))
        elif event == CheckEvent.CHECK_PASSED:
            self.print(
                colored(f"PASS {transformation}", "green")
                + colored(f" (preserved on {kwargs['tests']} tests)", "light_grey")
            )
        elif event == CheckEvent.CHECK_FAILED:
            witness = kwargs["witness"]
            self.print(colored(f"FAIL {transformation}", "red"))
            self.print(colored("  theory not preserved", "red"))
            self.print(colored(f"    formula: {witness.missing}", "light_grey"))
            self.print_indented(
                "    test set:",
                "\n\n".join(str(s) for s in sorted(witness.test, key=str)),
                "white",
            )
        elif event == CheckEvent.RUN_FAILED:
            self.print(colored("theory not preserved by every candidate", "red"))

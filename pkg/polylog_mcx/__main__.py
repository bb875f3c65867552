"""Run the polylog_mcx command line."""

from .cli import main

main()

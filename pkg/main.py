#!/usr/bin/env python3
# Command-line entry point for the certified Bell toolkit
import os
import sys

# Make the package importable when run from a checkout
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from bellcert.harness.cli import cli

if __name__ == '__main__':
    cli(prog_name="bellcert")

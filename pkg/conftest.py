"""Puts the flat modules at the repository root on sys.path for the test suites"""
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

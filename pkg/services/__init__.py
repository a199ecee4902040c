"""Services package for quartica: built-in curves and command implementations"""

"""Scripts package for quartica entry points"""

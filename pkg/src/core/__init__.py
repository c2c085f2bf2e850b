"""Core numerics package"""

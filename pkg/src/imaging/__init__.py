"""Imaging functionals package"""

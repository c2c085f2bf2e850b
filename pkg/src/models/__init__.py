"""Scattering data models package"""

"""Scene pipeline package"""

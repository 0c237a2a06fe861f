#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Created on Wed Oct 28 09:00:37 2026

Unit tests for pyResFlow
"""

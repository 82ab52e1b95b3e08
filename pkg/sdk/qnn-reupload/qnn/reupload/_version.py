# coding=utf-8
# --------------------------------------------------------------------------
# Licensed under the MIT License. See License.txt in the project root for license information.
# --------------------------------------------------------------------------

VERSION = "0.1.0a1"

# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

import sys

from qnn.reupload.cli import main


if __name__ == '__main__':
    sys.exit(main())

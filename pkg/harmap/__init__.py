# makes 'harmap' a proper Python package; the public API lives in the submodules

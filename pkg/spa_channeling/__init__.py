# SPA channeling package

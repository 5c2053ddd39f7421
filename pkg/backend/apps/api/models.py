# API app has no models; it serves recorded runs from apps.core

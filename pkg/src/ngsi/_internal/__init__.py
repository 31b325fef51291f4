"""Internal implementation layers. Import from `ngsi` for the supported surface."""

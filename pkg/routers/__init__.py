# routers module

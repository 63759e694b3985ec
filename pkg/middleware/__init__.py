# middleware module
